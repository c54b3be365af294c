#include "mella/cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mella/script/command.hpp"
#include "mella/script/syntax.hpp"
#include "mella/tptp/bench.hpp"

namespace mella::cli {

namespace fs = std::filesystem;

namespace {

std::string trimmed(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

void print_response(std::ostream& out, const script::Response& r) {
  out << r.output;
  if (!r.output.empty() && r.output.back() != '\n') out << "\n";
}

}  // namespace

int cmd_check(const std::string& path, std::ostream& out, std::ostream& err, const script::SessionConfig& config) {
  std::ifstream in(path);
  if (!in) {
    err << path << ": error: cannot open file\n";
    return 2;
  }
  std::stringstream text;
  text << in.rdbuf();
  std::vector<script::Command> commands;
  try {
    commands = script::parse_outer(text.str());
  } catch (const script::SyntaxError& e) {
    err << path << ":" << e.line << ":" << e.column << ": error: " << e.what() << "\n";
    return 1;
  }
  script::Session session(config);
  for (const auto& c : commands) {
    out << "> " << c.source << ".\n";
    script::Response r = session.execute(c);
    if (!r.ok) {
      kernel::SourceLoc at = r.loc.value_or(c.loc);
      err << path << ":" << at.line << ":" << at.column << ": error: " << trimmed(r.output) << "\n";
      return 1;
    }
    print_response(out, r);
  }
  if (session.state().open) {
    err << path << ": error: theorem " << session.state().open->name << " is not finished\n";
    return 1;
  }
  return 0;
}

int cmd_repl(std::istream& in, std::ostream& out, const script::SessionConfig& config, bool prompt) {
  script::Session session(config);
  std::string buffer;
  std::string line;
  auto show_prompt = [&] {
    if (prompt) out << (trimmed(buffer).empty() ? "mella> " : "  ...> ") << std::flush;
  };
  show_prompt();
  while (std::getline(in, line)) {
    buffer += line + "\n";
    std::string t = trimmed(buffer);
    if (t.empty() || t.back() != '.') {
      if (t.empty()) buffer.clear();
      show_prompt();
      continue;
    }
    std::vector<script::Command> commands;
    try {
      commands = script::parse_outer(buffer);
    } catch (const script::SyntaxError& e) {
      out << "error: " << e.line << ":" << e.column << ": " << e.what() << "\n";
      buffer.clear();
      show_prompt();
      continue;
    }
    buffer.clear();
    for (const auto& c : commands) {
      script::Response r = session.execute(c);
      if (!r.ok) out << "error: ";
      print_response(out, r);
      if (!r.ok) break;
    }
    show_prompt();
  }
  if (!trimmed(buffer).empty()) out << "error: unterminated command at end of input\n";
  return 0;
}

int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err, const bridge::ProverConfig& prover) {
  if (args.dir.empty() || !fs::is_directory(args.dir)) {
    err << "mella bench: corpus directory '" << args.dir << "' does not exist\n";
    return 2;
  }
  tptp::BenchmarkOptions options;
  options.timeouts = args.timeouts;
  options.jobs = args.jobs;
  options.prover = prover;
  options.on_row = [&](const tptp::BenchmarkRow& r) {
    out << r.problem << " @" << r.timeout << "s: " << tptp::to_string(r.outcome);
    if (r.reconstructed) out << (*r.reconstructed ? ", reconstructed" : ", reconstruction failed");
    out << "\n" << std::flush;
  };
  tptp::BenchmarkReport report = tptp::run_benchmark(args.dir, options);
  std::string table = tptp::summary_text(report.summary);
  out << "\n" << table;
  for (const auto& note : report.monotonicity) out << "note: " << note << "\n";
  if (!args.out.empty()) {
    fs::create_directories(args.out);
    auto write = [&](const char* name, const std::string& body) {
      std::ofstream f(fs::path(args.out) / name);
      f << body;
      if (!f) throw std::runtime_error("cannot write " + (fs::path(args.out) / name).string());
    };
    write("summary.csv", tptp::summary_csv(report.summary));
    write("scatter.csv", tptp::scatter_csv(report.rows));
    write("rows.csv", tptp::rows_csv(report.rows));
    write("summary.txt", table);
    out << "wrote " << args.out << "\n";
  }
  return 0;
}

}  // namespace mella::cli
