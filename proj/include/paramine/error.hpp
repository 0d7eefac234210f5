#pragma once

#include <stdexcept>
#include <string>

namespace paramine {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad user input: config values out of range, missing input files, malformed arguments.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// A pipeline stage aborted; carries the stage name so the CLI can report it.
class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& cause)
      : Error("stage " + stage + ": " + cause), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace paramine
