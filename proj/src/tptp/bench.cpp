#include "mella/tptp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "mella/script/session.hpp"
#include "mella/tptp/tptp.hpp"

namespace mella::tptp {

namespace fs = std::filesystem;

std::string_view to_string(SearchOutcome o) {
  switch (o) {
    case SearchOutcome::Proved: return "Proved";
    case SearchOutcome::Timeout: return "Timeout";
    case SearchOutcome::Error: return "Error";
    case SearchOutcome::Unprovable: return "Unprovable";
  }
  return "?";
}

std::optional<double> SummaryRow::percent() const {
  if (success + fail == 0) return std::nullopt;
  return 100.0 * static_cast<double>(success) / static_cast<double>(success + fail);
}

std::vector<fs::path> corpus_files(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".p") out.push_back(e.path());
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) { return a.stem() < b.stem(); });
  return out;
}

std::string problem_group(const std::string& problem) {
  std::string g;
  for (char c : problem) {
    if (std::isdigit(static_cast<unsigned char>(c))) break;
    g += c;
  }
  return g.empty() ? "MISC" : g;
}

BenchmarkRow run_problem(const fs::path& file, const fs::path& root, double timeout,
                         const bridge::ProverConfig& prover) {
  BenchmarkRow row;
  row.problem = file.stem().string();
  row.group = problem_group(row.problem);
  row.timeout = timeout;
  auto error = [&](const std::string& why) {
    row.outcome = SearchOutcome::Error;
    row.reason = why;
    return row;
  };
  try {
    Conversion conv = to_problem(parse_tptp_file(file, root), row.problem, timeout);
    script::Session session;
    for (const auto& r : session.run(conv.opening()))
      if (!r.ok) return error("kernel statement rejected: " + r.output);
    const auto& hole = session.state().open->state.metas.front();
    kernel::CheckState at;
    at.named = session.state().named;
    at.unnamed = hole.captured_unnamed;
    bridge::Translation tr = bridge::serialize_problem(at, hole.expected, conv.signature, conv.axioms,
                                                       bridge::OrderingChoice::LPO, timeout, row.problem);
    bridge::ProveReport rep = bridge::prove(tr, prover);
    row.search_seconds = rep.search_seconds;
    switch (rep.status) {
      case bridge::ProveStatus::Proved:
      case bridge::ProveStatus::ReconstructionFailed:
        row.outcome = SearchOutcome::Proved;
        row.reconstructed = rep.status == bridge::ProveStatus::Proved;
        row.recon_seconds = rep.reconstruct_seconds;
        if (!*row.reconstructed) row.reason = rep.message;
        break;
      case bridge::ProveStatus::Timeout: row.outcome = SearchOutcome::Timeout; break;
      case bridge::ProveStatus::Unprovable: row.outcome = SearchOutcome::Unprovable; break;
      case bridge::ProveStatus::SearchError: return error(rep.message);
    }
    return row;
  } catch (const std::exception& e) {
    return error(e.what());
  }
}

std::vector<SummaryRow> summarize(const std::vector<BenchmarkRow>& rows) {
  std::map<std::pair<std::string, double>, SummaryRow> m;
  for (const auto& r : rows) {
    SummaryRow& s = m[{r.group, -r.timeout}];
    s.group = r.group;
    s.timeout = r.timeout;
    switch (r.outcome) {
      case SearchOutcome::Timeout: ++s.timeouts; break;
      case SearchOutcome::Error: ++s.errors; break;
      case SearchOutcome::Unprovable: ++s.unprovable; break;
      case SearchOutcome::Proved: ++(*r.reconstructed ? s.success : s.fail); break;
    }
  }
  std::vector<SummaryRow> out;
  for (auto& [_, s] : m) out.push_back(s);
  return out;
}

BenchmarkReport run_benchmark(const fs::path& dir, const BenchmarkOptions& options) {
  std::vector<fs::path> files = corpus_files(dir);
  struct Task {
    std::size_t file;
    double timeout;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < files.size(); ++i)
    for (double t : options.timeouts) tasks.push_back({i, t});
  BenchmarkReport report;
  report.rows.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex out_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      report.rows[i] = run_problem(files[tasks[i].file], dir, tasks[i].timeout, options.prover);
      if (options.on_row) {
        std::lock_guard lock(out_mutex);
        options.on_row(report.rows[i]);
      }
    }
  };
  unsigned jobs = std::max(1u, options.jobs);
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::stable_sort(report.rows.begin(), report.rows.end(), [](const BenchmarkRow& a, const BenchmarkRow& b) {
    return a.problem != b.problem ? a.problem < b.problem : a.timeout < b.timeout;
  });
  report.summary = summarize(report.rows);

  std::map<std::string, std::vector<const BenchmarkRow*>> by_problem;
  for (const auto& r : report.rows) by_problem[r.problem].push_back(&r);
  for (const auto& [p, rs] : by_problem)
    for (std::size_t i = 0; i < rs.size(); ++i)
      for (std::size_t j = i + 1; j < rs.size(); ++j)
        if (rs[i]->outcome == SearchOutcome::Proved && rs[j]->outcome != SearchOutcome::Proved &&
            rs[j]->timeout > rs[i]->timeout) {
          std::ostringstream line;
          line << p << ": proved at " << rs[i]->timeout << " s but not at " << rs[j]->timeout << " s";
          report.monotonicity.push_back(line.str());
        }
  return report;
}

namespace {

std::string percent_text(const SummaryRow& s) {
  auto p = s.percent();
  if (!p) return "-";
  std::ostringstream o;
  o << std::fixed << std::setprecision(1) << *p;
  return o.str();
}

std::string seconds(double t) {
  std::ostringstream o;
  o << t;
  return o.str();
}

}  // namespace

std::string summary_text(const std::vector<SummaryRow>& summary) {
  std::ostringstream o;
  o << std::left << std::setw(7) << "Group" << std::right << std::setw(6) << "Time" << std::setw(9) << "Timeout"
    << std::setw(7) << "Error" << std::setw(12) << "Unprovable" << " |" << std::setw(6) << "Fail" << std::setw(9)
    << "Success" << std::setw(8) << "%" << "\n";
  std::string last;
  for (const auto& s : summary) {
    o << std::left << std::setw(7) << (s.group == last ? "" : s.group) << std::right << std::setw(6)
      << seconds(s.timeout) << std::setw(9) << s.timeouts << std::setw(7) << s.errors << std::setw(12)
      << s.unprovable << " |" << std::setw(6) << s.fail << std::setw(9) << s.success << std::setw(8)
      << percent_text(s) << "\n";
    last = s.group;
  }
  return o.str();
}

std::string summary_csv(const std::vector<SummaryRow>& summary) {
  std::ostringstream o;
  o << "group,time,timeout,error,unprovable,fail,success,percent\n";
  for (const auto& s : summary)
    o << s.group << "," << seconds(s.timeout) << "," << s.timeouts << "," << s.errors << "," << s.unprovable << ","
      << s.fail << "," << s.success << "," << (s.percent() ? percent_text(s) : "") << "\n";
  return o.str();
}

std::string scatter_csv(const std::vector<BenchmarkRow>& rows) {
  std::ostringstream o;
  o << "search_seconds,recon_seconds\n";
  o << std::setprecision(6);
  for (const auto& r : rows)
    if (r.reconstructed && *r.reconstructed)
      o << r.search_seconds << "," << r.recon_seconds << "\n";
  return o.str();
}

std::string rows_csv(const std::vector<BenchmarkRow>& rows) {
  auto quote = [](std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
  };
  std::ostringstream o;
  o << "problem,group,time_limit,outcome,search_seconds,reconstruction,recon_seconds,reason\n";
  for (const auto& r : rows)
    o << r.problem << "," << r.group << "," << seconds(r.timeout) << "," << to_string(r.outcome) << ","
      << r.search_seconds << "," << (r.reconstructed ? (*r.reconstructed ? "Success" : "Fail") : "") << ","
      << r.recon_seconds << "," << quote(r.reason) << "\n";
  return o.str();
}

}  // namespace mella::tptp
