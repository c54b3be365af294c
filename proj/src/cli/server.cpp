#include "mella/cli/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

#include "mella/cli/protocol.hpp"

namespace mella::cli {

namespace {

bool write_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

Server::~Server() {
  stop();
  std::list<Connection> all;
  {
    std::lock_guard lock(mutex_);
    all.splice(all.end(), connections_);
  }
  for (auto& c : all)
    if (c.worker.joinable()) c.worker.join();
}

std::uint16_t Server::listen(std::uint16_t port, const std::string& host) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) throw std::runtime_error("bad address " + host);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(listen_fd_, 16) < 0)
    throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port) + ": " + std::strerror(errno));
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  return ntohs(addr.sin_port);
}

void Server::run() {
  while (!stopping_) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR && !stopping_) continue;
      break;
    }
    std::lock_guard lock(mutex_);
    reap();
    if (stopping_) {
      ::close(fd);
      break;
    }
    Connection& c = connections_.emplace_back();
    c.fd = fd;
    c.worker = std::thread([this, &c] { serve(c); });
  }
}

void Server::stop() {
  if (stopping_.exchange(true)) return;
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
  }
  std::lock_guard lock(mutex_);
  for (auto& c : connections_)
    if (!c.done) ::shutdown(c.fd, SHUT_RDWR);
}

void Server::reap() {
  for (auto it = connections_.begin(); it != connections_.end();) {
    if (it->done) {
      it->worker.join();
      it = connections_.erase(it);
    } else {
      ++it;
    }
  }
}

void Server::serve(Connection& c) {
  ProtocolSession session(config_);
  auto emit = [&](const json& msg) {
    pollfd p{c.fd, POLLRDHUP, 0};
    if (::poll(&p, 1, 0) > 0 && (p.revents & (POLLRDHUP | POLLHUP | POLLERR))) return false;
    return write_all(c.fd, msg.dump() + "\n");
  };
  std::string buffer;
  char chunk[4096];
  bool open = true;
  while (open && !stopping_) {
    ssize_t n = ::recv(c.fd, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    for (std::size_t nl; open && (nl = buffer.find('\n')) != std::string::npos;) {
      std::string line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json reply = session.handle(line, emit);
      open = write_all(c.fd, reply.dump() + "\n") && !session.shutdown_requested();
    }
  }
  session.cancel();
  std::lock_guard lock(mutex_);
  ::close(c.fd);
  c.done = true;
}

}  // namespace mella::cli
