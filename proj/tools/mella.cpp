#include <csignal>
#include <iostream>
#include <thread>

#include <unistd.h>

#include <CLI11.hpp>

#include "mella/cli/commands.hpp"
#include "mella/cli/server.hpp"

namespace {

mella::script::SessionConfig session_config() {
  mella::script::SessionConfig config;
  config.prover.external = mella::bridge::external_prover_from_env();
  return config;
}

int serve(std::uint16_t port) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  mella::cli::Server server(session_config());
  std::uint16_t bound = server.listen(port);
  std::cout << "listening on 127.0.0.1:" << bound << std::endl;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.run();
  // run() also returns when the listener fails; wake the waiter either way.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  std::cout << "server stopped" << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mella: an interactive prover for equational goals in dependent type theory"};
  app.require_subcommand(1);

  std::string path;
  auto* check = app.add_subcommand("check", "run a script file; exit 0 iff every theorem is finished");
  check->add_option("file", path, "script file")->required();

  auto* repl = app.add_subcommand("repl", "read commands interactively");

  mella::cli::BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "run the TPTP unit-equality benchmark");
  bench->add_option("dir", bench_args.dir, "corpus directory")->required();
  bench->add_option("--timeouts", bench_args.timeouts, "time limits in seconds")->delimiter(',');
  bench->add_option("--jobs", bench_args.jobs, "worker threads")->check(CLI::PositiveNumber);
  bench->add_option("--out", bench_args.out, "directory for summary.csv, scatter.csv, rows.csv and summary.txt");

  std::uint16_t port = 0;
  auto* srv = app.add_subcommand("serve", "serve sessions over newline-delimited JSON");
  srv->add_option("--port", port, "TCP port, 0 for any free one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*check) return mella::cli::cmd_check(path, std::cout, std::cerr, session_config());
    if (*repl) return mella::cli::cmd_repl(std::cin, std::cout, session_config(), isatty(0));
    if (*bench) {
      mella::bridge::ProverConfig prover;
      prover.external = mella::bridge::external_prover_from_env();
      return mella::cli::cmd_bench(bench_args, std::cout, std::cerr, prover);
    }
    if (*srv) return serve(port);
  } catch (const std::exception& e) {
    std::cerr << "mella: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
