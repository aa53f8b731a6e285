#pragma once

#include <chrono>
#include <csignal>
#include <cstring>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "lateralsim/blue_agents.hpp"
#include "lateralsim/episode.hpp"
#include "lateralsim/protocol.hpp"

extern char** environ;

namespace lateralsim {

// Bidirectional line transport over a pair of file descriptors.
class LineChannel {
 public:
  LineChannel(int read_fd, int write_fd) : read_fd_(read_fd), write_fd_(write_fd) {}
  LineChannel(const LineChannel&) = delete;
  LineChannel& operator=(const LineChannel&) = delete;
  virtual ~LineChannel() { close_fds(); }

  void write_line(const std::string& line) {
    std::string data = line + "\n";
    std::size_t off = 0;
    while (off < data.size()) {
      const ssize_t n = ::write(write_fd_, data.data() + off, data.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ProtocolError(std::string("agent connection closed while writing: ") + std::strerror(errno));
      }
      off += static_cast<std::size_t>(n);
    }
  }

  // Next line without its terminator, or nullopt if the deadline passes.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
      if (auto pos = buffer_.find('\n'); pos != std::string::npos) {
        std::string line = buffer_.substr(0, pos);
        buffer_.erase(0, pos + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) return std::nullopt;
      pollfd pfd{read_fd_, POLLIN, 0};
      const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
      if (ready < 0) {
        if (errno == EINTR) continue;
        throw ProtocolError(std::string("poll failed: ") + std::strerror(errno));
      }
      if (ready == 0) return std::nullopt;
      char chunk[4096];
      const ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ProtocolError(std::string("read failed: ") + std::strerror(errno));
      }
      if (n == 0) throw ProtocolError("agent closed the connection");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 protected:
  void close_fds() {
    if (read_fd_ >= 0) ::close(read_fd_);
    if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
    read_fd_ = write_fd_ = -1;
  }
  void close_write() {
    if (write_fd_ >= 0 && write_fd_ != read_fd_) {
      ::close(write_fd_);
      write_fd_ = -1;
    }
  }

 private:
  int read_fd_;
  int write_fd_;
  std::string buffer_;
};

namespace detail {

inline void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace detail

// Runs `/bin/sh -c command` with its stdin/stdout attached to the channel.
class SubprocessChannel final : public LineChannel {
 public:
  static std::unique_ptr<SubprocessChannel> spawn(const std::string& command) {
    detail::ignore_sigpipe();
    int to_child[2], from_child[2];
    if (::pipe2(to_child, O_CLOEXEC) != 0) throw ProtocolError("pipe failed");
    if (::pipe2(from_child, O_CLOEXEC) != 0) {
      ::close(to_child[0]);
      ::close(to_child[1]);
      throw ProtocolError("pipe failed");
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, to_child[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, from_child[1], STDOUT_FILENO);
    const char* argv[] = {"sh", "-c", command.c_str(), nullptr};
    pid_t pid = -1;
    const int rc = ::posix_spawn(&pid, "/bin/sh", &actions, nullptr, const_cast<char* const*>(argv), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(to_child[0]);
    ::close(from_child[1]);
    if (rc != 0) {
      ::close(to_child[1]);
      ::close(from_child[0]);
      throw ProtocolError("failed to launch agent '" + command + "': " + std::strerror(rc));
    }
    return std::unique_ptr<SubprocessChannel>(new SubprocessChannel(from_child[0], to_child[1], pid));
  }

  ~SubprocessChannel() override {
    close_write();  // EOF on the agent's stdin
    int status = 0;
    for (int i = 0; i < 100; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) != 0) return;
      ::usleep(10'000);
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
  }

 private:
  SubprocessChannel(int rfd, int wfd, pid_t pid) : LineChannel(rfd, wfd), pid_(pid) {}
  pid_t pid_;
};

class TcpChannel final : public LineChannel {
 public:
  static std::unique_ptr<TcpChannel> connect(const std::string& host, int port) {
    detail::ignore_sigpipe();
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    const auto port_str = std::to_string(port);
    if (int rc = ::getaddrinfo(host.c_str(), port_str.c_str(), &hints, &res); rc != 0) {
      throw ProtocolError("cannot resolve " + host + ": " + ::gai_strerror(rc));
    }
    int fd = -1;
    for (auto* ai = res; ai; ai = ai->ai_next) {
      fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
      if (fd < 0) continue;
      if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
      ::close(fd);
      fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) throw ProtocolError("cannot connect to agent at " + host + ":" + port_str);
    return std::unique_ptr<TcpChannel>(new TcpChannel(fd));
  }

 private:
  explicit TcpChannel(int fd) : LineChannel(fd, fd) {}
};

// ---------------------------------------------------------------------------

struct ExternalEndpoint {
  std::string command;  // subprocess transport when non-empty
  std::string host;     // otherwise TCP
  int port = 0;
  std::chrono::milliseconds timeout{10'000};
  std::string name;
};

// A defender implemented in another process. The connection opens lazily on
// the first episode and stays up until the policy is destroyed.
class ExternalPolicy final : public BluePolicy {
 public:
  ExternalPolicy(const Network& net, ExternalEndpoint endpoint) : net_(&net), endpoint_(std::move(endpoint)) {}

  ~ExternalPolicy() override {
    if (!channel_) return;
    try {
      channel_->write_line(protocol::encode_message(protocol::SessionEnd{}));
    } catch (...) {
    }
  }

  std::string name() const override {
    if (!agent_name_.empty()) return "external:" + agent_name_;
    return endpoint_.name.empty() ? "external" : "external:" + endpoint_.name;
  }

  const std::string& agent_name() const { return agent_name_; }

  void reset(const EpisodeInfo& info) override {
    connect();
    episode_ = info.episode;
    send(protocol::EpisodeStart{info.episode, info.max_steps, info.seed});
  }

  ActionIndex act(const PolicyInput& in) override {
    send(protocol::Observation{in.step, {in.encoded.begin(), in.encoded.end()}, in.reward, false});
    const auto msg = receive("step " + std::to_string(in.step + 1));
    if (const auto* a = std::get_if<protocol::Action>(&msg)) {
      if (a->index < 0 || static_cast<std::uint64_t>(a->index) >= net_->action_count()) {
        throw ProtocolError(where("step " + std::to_string(in.step + 1)) + ": action index " +
                            std::to_string(a->index) + " outside [0, " + std::to_string(net_->action_count()) + ")");
      }
      return static_cast<ActionIndex>(a->index);
    }
    throw unexpected(msg, "step " + std::to_string(in.step + 1), "action");
  }

  void finish(const PolicyInput& in, double total) override {
    send(protocol::Observation{in.step, {in.encoded.begin(), in.encoded.end()}, in.reward, true});
    send(protocol::EpisodeEnd{total});
  }

 private:
  void connect() {
    if (channel_) return;
    if (!endpoint_.command.empty()) {
      channel_ = SubprocessChannel::spawn(endpoint_.command);
    } else {
      channel_ = TcpChannel::connect(endpoint_.host, endpoint_.port);
    }
    send(protocol::Hello{protocol::kVersion, net_->action_count(), net_->observation_length()});
    const auto msg = receive("handshake");
    const auto* ack = std::get_if<protocol::HelloAck>(&msg);
    if (!ack) throw unexpected(msg, "handshake", "hello_ack");
    if (ack->version && *ack->version != protocol::kVersion) {
      throw ProtocolError("handshake: agent speaks protocol version " + std::to_string(*ack->version) +
                          ", expected " + std::to_string(protocol::kVersion));
    }
    agent_name_ = ack->name;
  }

  void send(const protocol::Message& m) { channel_->write_line(protocol::encode_message(m)); }

  protocol::Message receive(const std::string& context) {
    std::optional<std::string> line;
    try {
      line = channel_->read_line(endpoint_.timeout);
    } catch (const ProtocolError& e) {
      throw ProtocolError(where(context) + ": " + e.what());
    }
    if (!line) {
      throw ProtocolError(where(context) + ": no response within " + std::to_string(endpoint_.timeout.count()) + " ms");
    }
    try {
      return protocol::decode_message(*line);
    } catch (const ProtocolError& e) {
      throw ProtocolError(where(context) + ": " + e.what());
    }
  }

  ProtocolError unexpected(const protocol::Message& msg, const std::string& context, std::string_view expected) {
    if (const auto* err = std::get_if<protocol::ErrorMsg>(&msg)) {
      return ProtocolError(where(context) + ": agent reported error " + err->code + ": " + err->detail);
    }
    return ProtocolError(where(context) + ": expected " + std::string(expected) + ", got " +
                         std::string(protocol::type_name(msg)));
  }

  std::string where(const std::string& context) const {
    return "protocol error (episode " + std::to_string(episode_) + ", " + context + ")";
  }

  const Network* net_;
  ExternalEndpoint endpoint_;
  std::unique_ptr<LineChannel> channel_;
  std::string agent_name_;
  std::uint64_t episode_ = 0;
};

// One episode against an external agent, traced exactly like an in-process run.
inline EpisodeTrace run_bridged_episode(const Network& net, const ExternalEndpoint& endpoint, const EpisodeParams& p) {
  ExternalPolicy policy(net, endpoint);
  return run_episode(net, policy, p);
}

}  // namespace lateralsim
