#include "liso/external_objective.hpp"

#include "liso/errors.hpp"
#include "liso/format.hpp"

#include <cerrno>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <cstring>
#include <memory>
#include <mutex>
#include <thread>

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

namespace liso {
namespace {

class ChildProcess {
 public:
  explicit ChildProcess(const std::string& command) : command_(command) {
    static std::once_flag ignore_sigpipe;
    std::call_once(ignore_sigpipe, [] { std::signal(SIGPIPE, SIG_IGN); });

    int to_child[2];
    int from_child[2];
    if (::pipe(to_child) != 0) throw EvaluationError(spawn_error("pipe"));
    if (::pipe(from_child) != 0) {
      ::close(to_child[0]);
      ::close(to_child[1]);
      throw EvaluationError(spawn_error("pipe"));
    }
    pid_ = ::fork();
    if (pid_ < 0) {
      for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
      throw EvaluationError(spawn_error("fork"));
    }
    if (pid_ == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    write_fd_ = to_child[1];
    read_stream_ = ::fdopen(from_child[0], "r");
    if (read_stream_ == nullptr) {
      ::close(from_child[0]);
      shutdown();
      throw EvaluationError(spawn_error("fdopen"));
    }
  }

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  ~ChildProcess() { shutdown(); }

  std::string round_trip(const std::string& request) {
    std::size_t written = 0;
    while (written < request.size()) {
      const ssize_t n = ::write(write_fd_, request.data() + written, request.size() - written);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw EvaluationError("external objective '" + command_ +
                              "': write failed: " + std::strerror(errno));
      }
      written += static_cast<std::size_t>(n);
    }
    char* line = nullptr;
    std::size_t capacity = 0;
    const ssize_t length = ::getline(&line, &capacity, read_stream_);
    std::unique_ptr<char, decltype(&std::free)> guard(line, &std::free);
    if (length < 0)
      throw EvaluationError("external objective '" + command_ + "': child closed its output");
    return std::string(line, static_cast<std::size_t>(length));
  }

 private:
  std::string spawn_error(const char* call) const {
    return "external objective '" + command_ + "': " + call + " failed: " + std::strerror(errno);
  }

  void shutdown() noexcept {
    if (write_fd_ >= 0) {
      ::close(write_fd_);
      write_fd_ = -1;
    }
    if (read_stream_ != nullptr) {
      std::fclose(read_stream_);
      read_stream_ = nullptr;
    }
    if (pid_ > 0) {
      // Give the child a moment to exit on EOF before killing it.
      for (int i = 0; i < 50; ++i) {
        if (::waitpid(pid_, nullptr, WNOHANG) != 0) {
          pid_ = -1;
          return;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
      }
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
      pid_ = -1;
    }
  }

  std::string command_;
  pid_t pid_ = -1;
  int write_fd_ = -1;
  FILE* read_stream_ = nullptr;
};

}  // namespace

std::string format_request(std::span<const double> x) {
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += format_double(x[i]);
  }
  out.push_back('\n');
  return out;
}

double parse_response(std::string_view line) {
  std::string_view text = line;
  while (!text.empty() && std::strchr(" \t\r\n", text.back()) != nullptr) text.remove_suffix(1);
  while (!text.empty() && std::strchr(" \t", text.front()) != nullptr) text.remove_prefix(1);
  const auto value = parse_double(text);
  if (!value) throw EvaluationError("malformed objective response", std::string(line));
  if (!std::isfinite(*value))
    throw EvaluationError("non-finite objective response", std::string(line));
  return *value;
}

Objective make_external_objective(std::string command, int dimension,
                                  std::optional<Vector> known_minimizer) {
  auto child = std::make_shared<ChildProcess>(command);
  ScalarFunction evaluator = [child, command](std::span<const double> x) {
    const std::string response = child->round_trip(format_request(x));
    try {
      return parse_response(response);
    } catch (const EvaluationError& e) {
      throw EvaluationError("external objective '" + command + "': " + e.what(),
                            e.raw_response());
    }
  };
  return Objective("external:" + command, dimension, std::move(evaluator),
                   std::move(known_minimizer));
}

}  // namespace liso
