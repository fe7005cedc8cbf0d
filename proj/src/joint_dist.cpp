#include "pcq/joint_dist.hpp"

#include <algorithm>
#include <cmath>

namespace pcq {

JointDist::JointDist(std::size_t qmax, std::size_t jmax)
    : qmax_(qmax), jmax_(jmax) {
  const std::size_t n = (qmax + 1) * (jmax + 1);
  dense_ = n <= kSparseThreshold;
  if (dense_) table_.assign(n, 0.0);
}

double JointDist::at(std::size_t i, std::size_t j) const {
  if (i > qmax_ || j > jmax_) return 0.0;
  const std::size_t k = i * (jmax_ + 1) + j;
  if (dense_) return table_[k];
  auto it = sparse_.find(k);
  return it == sparse_.end() ? 0.0 : it->second;
}

void JointDist::set(std::size_t i, std::size_t j, double v) {
  if (i > qmax_ || j > jmax_)
    throw DomainError("JointDist::set: index outside truncation");
  const std::size_t k = i * (jmax_ + 1) + j;
  if (dense_) {
    table_[k] = v;
  } else if (v != 0.0) {
    sparse_[k] = v;
  } else {
    sparse_.erase(k);
  }
}

double JointDist::total_mass() const {
  double s = 0.0;
  if (dense_) {
    for (double v : table_) s += v;
  } else {
    for (const auto& [k, v] : sparse_) s += v;
  }
  return s;
}

std::vector<double> JointDist::queue_marginal() const {
  std::vector<double> g(qmax_ + 1, 0.0);
  if (dense_) {
    for (std::size_t i = 0; i <= qmax_; ++i)
      for (std::size_t j = 0; j <= jmax_; ++j) g[i] += table_[i * (jmax_ + 1) + j];
  } else {
    for (const auto& [k, v] : sparse_) g[k / (jmax_ + 1)] += v;
  }
  return g;
}

std::vector<double> JointDist::speed_marginal() const {
  std::vector<double> s(jmax_ + 1, 0.0);
  if (dense_) {
    for (std::size_t i = 0; i <= qmax_; ++i)
      for (std::size_t j = 0; j <= jmax_; ++j) s[j] += table_[i * (jmax_ + 1) + j];
  } else {
    for (const auto& [k, v] : sparse_) s[k % (jmax_ + 1)] += v;
  }
  return s;
}

double JointDist::mean_queue() const {
  const auto g = queue_marginal();
  double m = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) m += static_cast<double>(i) * g[i];
  return m;
}

double JointDist::mean_speed() const {
  const auto s = speed_marginal();
  double m = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) m += static_cast<double>(j) * s[j];
  return m;
}

double JointDist::prob_empty() const {
  double s = 0.0;
  for (std::size_t j = 0; j <= jmax_; ++j) s += at(0, j);
  return s;
}

PgfPoint pgf_eval(const JointDist& d, double x, double y) {
  if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
    throw DomainError("pgf_eval: x and y must lie in [0,1]");
  double v = 0.0;
  // Horner in i, plain powers in j.
  for (std::size_t ii = d.qmax() + 1; ii-- > 0;) {
    double row = 0.0, yp = 1.0;
    for (std::size_t j = 0; j <= d.jmax(); ++j) {
      row += d.at(ii, j) * yp;
      yp *= y;
    }
    v = v * x + row;
  }
  return {x, y, v};
}

double pgf_eval_dy(const JointDist& d, double x, double y) {
  if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
    throw DomainError("pgf_eval_dy: x and y must lie in [0,1]");
  double v = 0.0;
  for (std::size_t ii = d.qmax() + 1; ii-- > 0;) {
    double row = 0.0, yp = 1.0;
    for (std::size_t j = 1; j <= d.jmax(); ++j) {
      row += static_cast<double>(j) * d.at(ii, j) * yp;
      yp *= y;
    }
    v = v * x + row;
  }
  return v;
}

double tv_distance(const JointDist& a, const JointDist& b) {
  const std::size_t qm = std::max(a.qmax(), b.qmax());
  const std::size_t jm = std::max(a.jmax(), b.jmax());
  double s = 0.0;
  for (std::size_t i = 0; i <= qm; ++i)
    for (std::size_t j = 0; j <= jm; ++j) s += std::abs(a.at(i, j) - b.at(i, j));
  return 0.5 * s;
}

} // namespace pcq
