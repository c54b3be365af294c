#ifndef MELLA_CLI_SERVER_HPP
#define MELLA_CLI_SERVER_HPP

#include <cstdint>
#include <list>
#include <mutex>
#include <string>
#include <thread>

#include "mella/script/session.hpp"

namespace mella::cli {

/// Newline-delimited JSON over TCP, one session and one thread per
/// connection.
class Server {
 public:
  explicit Server(script::SessionConfig config = {}) : config_(std::move(config)) {}
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and listens; port 0 picks a free one. Returns the bound port.
  /// Throws std::runtime_error.
  std::uint16_t listen(std::uint16_t port, const std::string& host = "127.0.0.1");
  /// Accepts connections until stop().
  void run();
  /// Closes the listener and all connections; safe from any thread.
  void stop();

 private:
  struct Connection {
    int fd = -1;
    std::thread worker;
    bool done = false;
  };
  void serve(Connection& c);
  void reap();

  script::SessionConfig config_;
  int listen_fd_ = -1;
  std::atomic<bool> stopping_{false};
  std::mutex mutex_;
  std::list<Connection> connections_;
};

}  // namespace mella::cli

#endif
