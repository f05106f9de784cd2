#pragma once

// Command-line front end. Exit codes: 0 convex / verified / done, 1 negative
// answer or search came up empty, 2 input error or exceeded resource cap.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace esflats::cli {

inline constexpr int kYes = 0;
inline constexpr int kNo = 1;
inline constexpr int kError = 2;

struct ExperimentSpec {
  std::string mode;  // points, lines, hyperplanes, flats
  std::size_t d = 2;
  std::size_t k = 0;
  std::size_t n = 4;
  std::size_t N = 5;
  std::size_t trials = 10;
  std::uint64_t seed = 1;
};

struct ExperimentRow {
  std::uint64_t seed = 0;
  std::size_t N = 0;
  std::size_t found_size = 0;
  bool verified = false;
};

/// Throws InputError for parameters outside the mode's range.
void validate(const ExperimentSpec& spec);

/// One row per trial, in trial order; trial t uses seed spec.seed + t.
std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec);

/// Header "seed,N,found_size,verified" and one line per row.
std::string to_csv(const std::vector<ExperimentRow>& rows);

/// Runs one verb; `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace esflats::cli
