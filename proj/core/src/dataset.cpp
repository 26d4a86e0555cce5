#include "mbl/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "mbl/errors.hpp"

namespace mbl {

MblDataset::MblDataset(std::vector<Subject> subjects) : subjects_(std::move(subjects)) {
  if (!subjects_.empty()) k_ = static_cast<int>(subjects_.front().outcomes.cols());
  validate();
}

long MblDataset::total_observations() const {
  long n = 0;
  for (const auto& s : subjects_) n += static_cast<long>(s.times.size());
  return n;
}

void MblDataset::validate() const {
  for (std::size_t i = 0; i < subjects_.size(); ++i) {
    const Subject& s = subjects_[i];
    const auto tag = "subject " + std::to_string(i + 1);
    if (s.times.empty()) throw std::invalid_argument(tag + ": no observations");
    if (!(s.duration > 0.0) || !std::isfinite(s.duration))
      throw std::invalid_argument(tag + ": duration must be positive");
    if (s.outcomes.rows() != static_cast<Eigen::Index>(s.times.size()) ||
        s.outcomes.cols() != k_)
      throw std::invalid_argument(tag + ": outcome matrix shape mismatch");
    double prev = -1.0;
    for (double t : s.times) {
      if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument(tag + ": time outside [0,1]");
      if (t < prev) throw std::invalid_argument(tag + ": times must be nondecreasing");
      prev = t;
    }
    for (Eigen::Index r = 0; r < s.outcomes.rows(); ++r)
      for (Eigen::Index c = 0; c < s.outcomes.cols(); ++c) {
        const double y = s.outcomes(r, c);
        if (y != 0.0 && y != 1.0) throw std::invalid_argument(tag + ": outcomes must be 0 or 1");
      }
  }
}

namespace {

bool parse_double(const std::string& tok, double& out) {
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> toks;
  if (line.find(',') != std::string::npos) {
    std::string tok;
    std::stringstream ss(line);
    while (std::getline(ss, tok, ',')) {
      // trim surrounding spaces
      const auto b = tok.find_first_not_of(" \t\r");
      const auto e = tok.find_last_not_of(" \t\r");
      toks.push_back(b == std::string::npos ? std::string() : tok.substr(b, e - b + 1));
    }
  } else {
    std::stringstream ss(line);
    std::string tok;
    while (ss >> tok) toks.push_back(tok);
  }
  return toks;
}

// shortest decimal form that parses back to the same double
std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

MblDataset parse_dataset(const std::string& text) {
  std::vector<Subject> subjects;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> rows;
  double cur_duration = 0.0;
  int ncols = -1;

  auto flush_subject = [&]() {
    if (times.empty()) return;
    Subject s;
    s.duration = cur_duration;
    s.times = times;
    s.outcomes.resize(static_cast<Eigen::Index>(rows.size()), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) s.outcomes.row(static_cast<Eigen::Index>(r)) = rows[r];
    subjects.push_back(std::move(s));
    times.clear();
    rows.clear();
  };

  std::istringstream in(text);
  std::string line;
  long row_no = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto toks = split_row(line);
    if (header_allowed) {
      header_allowed = false;
      double probe;
      if (!toks.empty() && !parse_double(toks.front(), probe)) continue;  // header line
    }
    if (ncols < 0) {
      ncols = static_cast<int>(toks.size());
      if (ncols < 3) throw ParseError("need at least one outcome column plus duration and time", row_no);
    } else if (static_cast<int>(toks.size()) != ncols) {
      throw ParseError("ragged row: expected " + std::to_string(ncols) + " columns, got " +
                           std::to_string(toks.size()),
                       row_no);
    }
    const int K = ncols - 2;
    Eigen::VectorXd y(K);
    for (int k = 0; k < K; ++k) {
      double v;
      if (!parse_double(toks[static_cast<std::size_t>(k)], v) || (v != 0.0 && v != 1.0))
        throw ParseError("outcome column " + std::to_string(k + 1) + " must be 0 or 1", row_no);
      y[k] = v;
    }
    double d, t;
    if (!parse_double(toks[static_cast<std::size_t>(K)], d) || !(d > 0.0) || !std::isfinite(d))
      throw ParseError("duration must be a positive number", row_no);
    if (!parse_double(toks[static_cast<std::size_t>(K + 1)], t) || !(t >= 0.0 && t <= 1.0))
      throw ParseError("standardized time must lie in [0,1]", row_no);

    const bool boundary = times.empty() || d != cur_duration || t < times.back();
    if (boundary) flush_subject();
    cur_duration = d;
    times.push_back(t);
    rows.push_back(std::move(y));
  }
  flush_subject();
  if (subjects.empty()) throw ParseError("no data rows", row_no == 0 ? 1 : row_no);
  return MblDataset(std::move(subjects));
}

MblDataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open dataset file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str());
}

std::string format_dataset(const MblDataset& data) {
  std::string out;
  const int K = data.n_responses();
  for (int k = 1; k <= K; ++k) out += "y" + std::to_string(k) + ",";
  out += "duration,time\n";
  for (const auto& s : data.subjects()) {
    for (std::size_t j = 0; j < s.times.size(); ++j) {
      for (int k = 0; k < K; ++k)
        out += (s.outcomes(static_cast<Eigen::Index>(j), k) != 0.0 ? "1," : "0,");
      out += format_double(s.duration);
      out += ',';
      out += format_double(s.times[j]);
      out += '\n';
    }
  }
  return out;
}

void save_dataset(const MblDataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write dataset file: " + path);
  out << format_dataset(data);
}

}  // namespace mbl
