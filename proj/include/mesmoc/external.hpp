#pragma once

#include <mutex>
#include <string>

#include "mesmoc/problem.hpp"

namespace mesmoc {

// Black box backed by a child process. The command is spawned once; each
// evaluation writes one line of JSON {"x":[...]} to the child's stdin and
// reads one line {"objectives":[...],"constraints":[...]} from its stdout.
// A non-zero exit, closed pipe, or malformed reply throws std::runtime_error
// carrying the raw payload. Requests are serialized on the connection.
class ExternalEvaluator : public Blackbox {
 public:
  ExternalEvaluator(std::string command, int num_objectives, int num_constraints);
  ~ExternalEvaluator() override;

  ExternalEvaluator(const ExternalEvaluator&) = delete;
  ExternalEvaluator& operator=(const ExternalEvaluator&) = delete;

  OutputVector evaluate_raw(const Vector& x) override;

 private:
  void spawn_child();
  void close_pipes();

  std::string command_;
  int num_objectives_;
  int num_constraints_;
  std::mutex io_mutex_;
  int child_pid_ = -1;
  int to_child_ = -1;    // write end of the child's stdin
  int from_child_ = -1;  // read end of the child's stdout
};

}  // namespace mesmoc
