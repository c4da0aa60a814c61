#pragma once

#include <ostream>
#include <string>

#include "atomnli/config.hpp"

namespace atomnli {

// Command bodies behind the `atomnli` binary. Exit codes are a stable
// contract: 0 success, 2 input/schema error, 3 backend error.

struct GlobalArgs {
  std::string workdir = ".";
  std::string config_path;  // optional; defaults apply when empty
};

int cmd_decompose(const GlobalArgs& global, const std::string& input, const std::string& output,
                  std::ostream& out, std::ostream& err);

int cmd_build(const GlobalArgs& global, std::ostream& out, std::ostream& err);

struct EvalArgs {
  std::string test_path;
  std::string mode = "strict";
  bool compare = false;
  std::string output_json;  // optional
  std::string output_csv;   // optional
};

int cmd_eval(const GlobalArgs& global, const EvalArgs& args, std::ostream& out, std::ostream& err);

struct JudgeArgs {
  std::string premise;
  std::string hypothesis;
  std::string mode = "strict";
  bool as_json = false;
};

int cmd_judge(const GlobalArgs& global, const JudgeArgs& args, std::ostream& out,
              std::ostream& err);

int cmd_stats(const GlobalArgs& global, const std::string& input, const std::string& output,
              std::ostream& out, std::ostream& err);

/// Decompose + classify + print with caller-supplied backends; cmd_judge is
/// this plus config plumbing. Kept separate so scripted backends can drive it.
int judge_and_print(const Backends& backends, const JudgeArgs& args, int workers,
                    std::ostream& out);

}  // namespace atomnli
