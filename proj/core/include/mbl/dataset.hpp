#ifndef MBL_DATASET_HPP
#define MBL_DATASET_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

namespace mbl {

/// One episode: duration in minutes, standardized observation times in
/// [0,1] (nondecreasing), and an n_i x K matrix of 0/1 outcomes.
struct Subject {
  double duration = 0.0;
  std::vector<double> times;
  Eigen::MatrixXd outcomes;
};

class MblDataset {
 public:
  MblDataset() = default;
  explicit MblDataset(std::vector<Subject> subjects);

  const std::vector<Subject>& subjects() const { return subjects_; }
  int n_responses() const { return k_; }
  int n_subjects() const { return static_cast<int>(subjects_.size()); }
  long total_observations() const;

  /// Checks invariants: n_i >= 1, outcomes in {0,1}, times nondecreasing in
  /// [0,1], durations positive, K constant. Throws std::invalid_argument.
  void validate() const;

 private:
  std::vector<Subject> subjects_;
  int k_ = 0;
};

/// Reads the K+2-column episode file: K binary outcome columns, then
/// duration (minutes), then standardized time. Rows are grouped into
/// subjects where consecutive rows share the duration value and times are
/// nondecreasing; a time decrease or duration change starts a new subject.
/// Accepts comma- or whitespace-delimited rows and skips one header line.
/// The supplementary 10-column layout is the K = 8 case.
MblDataset load_dataset(const std::string& path);
MblDataset parse_dataset(const std::string& text);

/// Comma-delimited with a header; floats written in shortest round-trip
/// form so load(save(x)) == x bit-exactly.
void save_dataset(const MblDataset& data, const std::string& path);
std::string format_dataset(const MblDataset& data);

}  // namespace mbl

#endif
