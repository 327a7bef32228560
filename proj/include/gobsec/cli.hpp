#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gobsec/parser.hpp"
#include "gobsec/prni.hpp"

namespace gobsec {

namespace exit_code {
constexpr int kOk = 0;
constexpr int kTypeError = 1;
constexpr int kInputError = 2;  // parse, well-formedness, configuration
constexpr int kTimeout = 3;
constexpr int kStuck = 4;
constexpr int kCounterexample = 5;
}  // namespace exit_code

/// Observation type used when none is given: the synthesized type, else the
/// body's outermost ascription, else the public simple type.
SecType default_observation(const SourceProgram& program);

/// Renders a security type with facets folded back to the program's aliases.
std::string display(const SecType& s, const SourceProgram& program);

struct CorpusEntry {
  std::string file;
  Expectation expected = Expectation::None;
  Expectation actual = Expectation::None;
  bool pass = false;
  std::string detail;
};

/// Verdict for one program: secure if it typechecks; insecure if it is
/// rejected, simple-typechecks, and the differential test refutes it;
/// ill-typed otherwise.
Expectation classify(const SourceProgram& program, const PrniConfig& config,
                     std::string* detail = nullptr);

/// Every `.gobsec` file in `dir`, sorted by file name.
std::vector<CorpusEntry> run_corpus(const std::filesystem::path& dir, const PrniConfig& config,
                                    bool parallel = true);

std::uint64_t seed_from_env();

/// Entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gobsec
