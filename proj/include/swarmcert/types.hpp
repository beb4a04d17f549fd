#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace swarmcert {

/// Dense row-major N x d storage. Rows are agents, columns are coordinates.
class StateMatrix {
 public:
  StateMatrix() = default;
  StateMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static StateMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("StateMatrix: no rows");
    StateMatrix m(rows.size(), rows.front().size());
    if (m.cols_ == 0) throw std::invalid_argument("StateMatrix: zero columns");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_)
        throw std::invalid_argument("StateMatrix: ragged rows");
      for (std::size_t k = 0; k < m.cols_; ++k) {
        if (!std::isfinite(rows[i][k]))
          throw std::invalid_argument("StateMatrix: non-finite entry");
        m(i, k) = rows[i][k];
      }
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double operator()(std::size_t i, std::size_t k) const { return data_[i * cols_ + k]; }
  double& operator()(std::size_t i, std::size_t k) { return data_[i * cols_ + k]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }

  /// *this += c * other (shapes must match).
  void add_scaled(double c, const StateMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
      throw std::invalid_argument("StateMatrix: shape mismatch");
    for (std::size_t idx = 0; idx < data_.size(); ++idx)
      data_[idx] += c * other.data_[idx];
  }

  void scale(double c) {
    for (double& v : data_) v *= c;
  }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  friend bool operator==(const StateMatrix&, const StateMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Euclidean gap |x_i - x_j| between two rows.
inline double row_gap_norm(const StateMatrix& m, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const double d = m(i, k) - m(j, k);
    s += d * d;
  }
  return std::sqrt(s);
}

inline double row_norm(const StateMatrix& m, std::size_t i) {
  double s = 0.0;
  for (std::size_t k = 0; k < m.cols(); ++k) s += m(i, k) * m(i, k);
  return std::sqrt(s);
}

/// Raised when a run leaves the representable range (the dynamics are
/// dissipative, so this indicates a grossly unstable step choice).
class simulation_error : public std::runtime_error {
 public:
  explicit simulation_error(const std::string& what, double t = 0.0)
      : std::runtime_error(what), time(t) {}
  double time;
};

enum class ScalingMode { fixed, normalized };
enum class Condition { pe, isc };

/// System-level parameters shared by the dynamics and the guarantees.
/// `window` is the sliding-window length T, `service` the minimum
/// integrated weight mu per window.
struct SystemConfig {
  int n_agents = 2;
  int dim = 1;
  ScalingMode scaling = ScalingMode::fixed;
  Condition condition = Condition::pe;
  double window = 1.0;
  double service = 1.0;

  void validate() const {
    if (n_agents < 2) throw std::invalid_argument("SystemConfig: n_agents must be >= 2");
    if (dim < 1) throw std::invalid_argument("SystemConfig: dim must be >= 1");
    if (!(window > 0.0) || !std::isfinite(window))
      throw std::invalid_argument("SystemConfig: window must be positive");
    if (!(service > 0.0) || !std::isfinite(service))
      throw std::invalid_argument("SystemConfig: service must be positive");
    if (service > window)
      throw std::invalid_argument("SystemConfig: service cannot exceed window");
  }
};

struct FirstOrderState {
  StateMatrix positions;
};

struct SecondOrderState {
  StateMatrix positions;
  StateMatrix velocities;
};

}  // namespace swarmcert
