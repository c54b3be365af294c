#ifndef MELLA_TPTP_BENCH_HPP
#define MELLA_TPTP_BENCH_HPP

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mella/bridge/prover.hpp"

namespace mella::tptp {

enum class SearchOutcome { Proved, Timeout, Error, Unprovable };
std::string_view to_string(SearchOutcome o);

struct BenchmarkRow {
  std::string problem;
  std::string group;  // GRP, LAT, BOO, RNG, ...
  double timeout = 0;
  SearchOutcome outcome = SearchOutcome::Error;
  double search_seconds = 0;
  /// Set iff outcome is Proved.
  std::optional<bool> reconstructed;
  double recon_seconds = 0;
  std::string reason;  // reconstruction failure or search error
};

/// One line of the summary table: a problem group at one time limit.
struct SummaryRow {
  std::string group;
  double timeout = 0;
  std::size_t timeouts = 0;
  std::size_t errors = 0;
  std::size_t unprovable = 0;
  std::size_t fail = 0;
  std::size_t success = 0;

  std::size_t total() const { return timeouts + errors + unprovable + fail + success; }
  /// success / (success + fail) in percent; nullopt when nothing was proved.
  std::optional<double> percent() const;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;  // sorted by problem, then timeout
  std::vector<SummaryRow> summary;
  /// "GRP003-1: proved at 1 s but not at 5 s"
  std::vector<std::string> monotonicity;
};

struct BenchmarkOptions {
  std::vector<double> timeouts{1, 5};
  unsigned jobs = 1;
  bridge::ProverConfig prover;
  std::function<void(const BenchmarkRow&)> on_row;  // called from worker threads, serialised
};

/// `*.p` files below `dir`, sorted by name.
std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& dir);

/// The letters before the first digit of the file stem.
std::string problem_group(const std::string& problem);

/// Parses, converts, searches and reconstructs one problem. Never throws;
/// failures become Error rows. Includes resolve against `root`.
BenchmarkRow run_problem(const std::filesystem::path& file, const std::filesystem::path& root, double timeout,
                         const bridge::ProverConfig& prover = {});

BenchmarkReport run_benchmark(const std::filesystem::path& dir, const BenchmarkOptions& options = {});
std::vector<SummaryRow> summarize(const std::vector<BenchmarkRow>& rows);

/// Aligned text with the columns Group, Time, Timeout, Error, Unprovable,
/// Fail, Success, %.
std::string summary_text(const std::vector<SummaryRow>& summary);
std::string summary_csv(const std::vector<SummaryRow>& summary);
/// search_seconds,recon_seconds for every reconstructed proof.
std::string scatter_csv(const std::vector<BenchmarkRow>& rows);
std::string rows_csv(const std::vector<BenchmarkRow>& rows);

}  // namespace mella::tptp

#endif
