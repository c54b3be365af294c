#include "mella/bridge/prover.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>

namespace mella::bridge {

ExternalProverError::ExternalProverError(Kind k, const std::string& message, std::string err)
    : std::runtime_error(message), kind(k), stderr_text(std::move(err)) {}

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& text) {
    char name[] = "/tmp/mella-problem-XXXXXX";
    int fd = mkstemp(name);
    if (fd < 0) throw ExternalProverError(ExternalProverError::Kind::Spawn, "cannot create a temporary file");
    path = name;
    std::size_t off = 0;
    while (off < text.size()) {
      ssize_t w = ::write(fd, text.data() + off, text.size() - off);
      if (w <= 0) {
        ::close(fd);
        throw ExternalProverError(ExternalProverError::Kind::Spawn, "cannot write " + path);
      }
      off += static_cast<std::size_t>(w);
    }
    ::close(fd);
  }
  ~TempFile() { ::unlink(path.c_str()); }
};

}  // namespace

std::string run_external(const std::string& command, const ProblemFile& problem, double timeout) {
  using Kind = ExternalProverError::Kind;
  TempFile file(serialize(problem));
  int out[2], err[2], status_pipe[2];
  if (pipe(out) || pipe(err) || pipe2(status_pipe, O_CLOEXEC))
    throw ExternalProverError(Kind::Spawn, std::string("pipe: ") + std::strerror(errno));
  pid_t pid = fork();
  if (pid < 0) throw ExternalProverError(Kind::Spawn, std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    dup2(out[1], 1);
    dup2(err[1], 2);
    close(out[0]);
    close(err[0]);
    close(status_pipe[0]);
    const char* argv[] = {command.c_str(), "--details", file.path.c_str(), nullptr};
    execvp(argv[0], const_cast<char* const*>(argv));
    int e = errno;
    (void)!::write(status_pipe[1], &e, sizeof e);
    _exit(127);
  }
  close(out[1]);
  close(err[1]);
  close(status_pipe[1]);

  int exec_errno = 0;
  bool exec_failed = ::read(status_pipe[0], &exec_errno, sizeof exec_errno) == sizeof exec_errno;
  close(status_pipe[0]);

  std::string stdout_text, stderr_text;
  auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout);
  pollfd fds[2] = {{out[0], POLLIN, 0}, {err[0], POLLIN, 0}};
  int open_fds = 2;
  bool timed_out = false;
  char buf[4096];
  while (open_fds > 0) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      timed_out = true;
      break;
    }
    int r = poll(fds, 2, static_cast<int>(left.count()));
    if (r < 0 && errno == EINTR) continue;
    if (r <= 0) continue;
    for (auto& f : fds) {
      if (f.fd < 0 || !(f.revents & (POLLIN | POLLHUP | POLLERR))) continue;
      ssize_t n = ::read(f.fd, buf, sizeof buf);
      if (n <= 0) {
        close(f.fd);
        f.fd = -1;
        --open_fds;
      } else {
        (&f == &fds[0] ? stdout_text : stderr_text).append(buf, static_cast<std::size_t>(n));
      }
    }
  }
  for (auto& f : fds)
    if (f.fd >= 0) close(f.fd);
  if (timed_out) kill(pid, SIGKILL);
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (exec_failed)
    throw ExternalProverError(Kind::Spawn, "cannot run '" + command + "': " + std::strerror(exec_errno));
  if (timed_out)
    throw ExternalProverError(Kind::Timeout, "'" + command + "' timed out after " + std::to_string(timeout) + " s",
                              stderr_text);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    std::string why = WIFEXITED(status) ? "exit status " + std::to_string(WEXITSTATUS(status))
                                        : "signal " + std::to_string(WTERMSIG(status));
    throw ExternalProverError(Kind::ExitStatus, "'" + command + "' failed with " + why, stderr_text);
  }
  return stdout_text;
}

std::optional<std::string> external_prover_from_env() {
  const char* v = std::getenv("MELLA_EXTERNAL_PROVER");
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

std::string_view to_string(ProveStatus s) {
  switch (s) {
    case ProveStatus::Proved: return "proved";
    case ProveStatus::Timeout: return "timeout";
    case ProveStatus::Unprovable: return "unprovable";
    case ProveStatus::SearchError: return "error";
    case ProveStatus::ReconstructionFailed: return "reconstruction failed";
  }
  return "?";
}

ProveReport prove(const Translation& tr, const ProverConfig& config) {
  using clock = std::chrono::steady_clock;
  ProveReport rep;
  auto t0 = clock::now();
  try {
    if (config.external) {
      rep.prover = *config.external;
      rep.trace_text = run_external(*config.external, tr.file, tr.timeout);
      if (rep.trace_text.find("Theorem") == std::string::npos) {
        rep.search_seconds = std::chrono::duration<double>(clock::now() - t0).count();
        rep.status = ProveStatus::Unprovable;
        rep.message = "the external prover printed no proof";
        return rep;
      }
    } else {
      rep.prover = "bundled";
      rw::Limits limits;
      limits.seconds = tr.timeout;
      limits.stop = config.stop;
      limits.progress = config.progress;
      rw::Outcome out = rw::complete(tr.file.problem(), limits);
      rep.search = out.stats;
      rep.message = out.message;
      if (out.status != rw::Status::Proved) {
        rep.search_seconds = std::chrono::duration<double>(clock::now() - t0).count();
        rep.status = out.status == rw::Status::Timeout      ? ProveStatus::Timeout
                     : out.status == rw::Status::Unprovable ? ProveStatus::Unprovable
                                                            : ProveStatus::SearchError;
        return rep;
      }
      rep.trace_text = rw::render_trace(*out.trace);
    }
  } catch (const ExternalProverError& e) {
    rep.search_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    rep.status = e.kind == ExternalProverError::Kind::Timeout ? ProveStatus::Timeout : ProveStatus::SearchError;
    rep.message = e.what();
    if (!e.stderr_text.empty()) rep.message += "\n" + e.stderr_text;
    return rep;
  }
  rep.search_seconds = std::chrono::duration<double>(clock::now() - t0).count();

  auto t1 = clock::now();
  try {
    rep.trace = parse_proof_trace(rep.trace_text, tr.file);
    rep.result = reconstruct(tr, *rep.trace, config.reconstruct);
    rep.status = ProveStatus::Proved;
  } catch (const ParseError& e) {
    rep.status = ProveStatus::ReconstructionFailed;
    rep.message = std::string("proof output, ") + e.what();
  } catch (const ReconstructionError& e) {
    rep.status = ProveStatus::ReconstructionFailed;
    rep.message = e.what();
  }
  rep.reconstruct_seconds = std::chrono::duration<double>(clock::now() - t1).count();
  return rep;
}

}  // namespace mella::bridge
