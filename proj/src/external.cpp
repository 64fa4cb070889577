#include "mesmoc/external.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <csignal>
#include <cstdio>
#include <cstring>
#include <json.hpp>
#include <sstream>

namespace mesmoc {

ExternalEvaluator::ExternalEvaluator(std::string command, int num_objectives, int num_constraints)
    : command_(std::move(command)),
      num_objectives_(num_objectives),
      num_constraints_(num_constraints) {
  // A child that dies mid-conversation must surface as a write/read error,
  // not as a fatal SIGPIPE.
  std::signal(SIGPIPE, SIG_IGN);
  spawn_child();
}

ExternalEvaluator::~ExternalEvaluator() {
  close_pipes();
  if (child_pid_ > 0) {
    int status = 0;
    waitpid(child_pid_, &status, 0);
  }
}

void ExternalEvaluator::spawn_child() {
  int in_pipe[2];   // parent -> child
  int out_pipe[2];  // child -> parent
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
    throw std::runtime_error("external evaluator: pipe() failed");
  }
  const pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("external evaluator: fork() failed");
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  child_pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
}

void ExternalEvaluator::close_pipes() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
}

OutputVector ExternalEvaluator::evaluate_raw(const Vector& x) {
  std::lock_guard<std::mutex> lock(io_mutex_);

  nlohmann::json req;
  req["x"] = std::vector<double>(x.data(), x.data() + x.size());
  std::string line = req.dump();
  line.push_back('\n');

  size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = write(to_child_, line.data() + written, line.size() - written);
    if (n <= 0) throw std::runtime_error("external evaluator: child stdin closed");
    written += static_cast<size_t>(n);
  }

  std::string reply;
  char ch = 0;
  for (;;) {
    const ssize_t n = read(from_child_, &ch, 1);
    if (n == 0) {
      // Child hung up; collect its exit status for the error message.
      int status = 0;
      waitpid(child_pid_, &status, 0);
      child_pid_ = -1;
      std::ostringstream msg;
      msg << "external evaluator: child exited";
      if (WIFEXITED(status)) msg << " with status " << WEXITSTATUS(status);
      msg << "; partial reply: \"" << reply << "\"";
      throw std::runtime_error(msg.str());
    }
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error("external evaluator: read failed");
    }
    if (ch == '\n') break;
    reply.push_back(ch);
    if (reply.size() > (1u << 20)) {
      throw std::runtime_error("external evaluator: reply exceeds 1 MiB without newline");
    }
  }

  nlohmann::json parsed = nlohmann::json::parse(reply, nullptr, false);
  if (parsed.is_discarded() || !parsed.contains("objectives") || !parsed.contains("constraints") ||
      !parsed["objectives"].is_array() || !parsed["constraints"].is_array()) {
    throw std::runtime_error("external evaluator: malformed reply: \"" + reply + "\"");
  }
  const auto objs = parsed["objectives"].get<std::vector<double>>();
  const auto cons = parsed["constraints"].get<std::vector<double>>();
  if (static_cast<int>(objs.size()) != num_objectives_ ||
      static_cast<int>(cons.size()) != num_constraints_) {
    throw std::runtime_error("external evaluator: wrong output arity in reply: \"" + reply + "\"");
  }
  OutputVector y;
  y.objectives = Eigen::Map<const Vector>(objs.data(), static_cast<Eigen::Index>(objs.size()));
  y.constraints = Eigen::Map<const Vector>(cons.data(), static_cast<Eigen::Index>(cons.size()));
  return y;
}

}  // namespace mesmoc
