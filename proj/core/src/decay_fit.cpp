#include "rvm/decay_fit.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "rvm/error.hpp"

namespace rvm {

DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& y, double t1, double t2, bool log_aware,
                   const std::string& quantity) {
  if (t.size() != y.size()) throw ValidationError("", "decay_fit: series lengths differ");
  if (!(t1 > 0.0) || t2 < 10.0 * t1 * (1.0 - 1e-9))
    throw ValidationError("", "decay_fit: window [" + std::to_string(t1) + ", " + std::to_string(t2) +
                                  "] spans less than one decade");
  if (log_aware && !(t1 > 1.0)) throw ValidationError("", "decay_fit: log-aware mode needs t1 > 1");
  DecayFit fit;
  fit.quantity = quantity;
  fit.t1 = t1;
  fit.t2 = t2;
  std::vector<double> lt, ly;
  bool any_nonzero = false;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t1 * (1.0 - 1e-12) || t[k] > t2 * (1.0 + 1e-12)) continue;
    if (y[k] != 0.0) any_nonzero = true;
    lt.push_back(t[k]);
    ly.push_back(y[k]);
  }
  fit.samples = lt.size();
  if (lt.size() < 3) throw ValidationError("", "decay_fit: fewer than 3 samples in the window");
  if (!any_nonzero) {
    fit.exact_zero = true;
    fit.exponent = -std::numeric_limits<double>::infinity();
    return fit;
  }
  const int cols = log_aware ? 3 : 2;
  Eigen::MatrixXd A(static_cast<Eigen::Index>(lt.size()), cols);
  Eigen::VectorXd b(static_cast<Eigen::Index>(lt.size()));
  for (std::size_t k = 0; k < lt.size(); ++k) {
    if (!(ly[k] > 0.0))
      throw ValidationError("", "decay_fit: nonpositive value " + std::to_string(ly[k]) + " at t = " + std::to_string(lt[k]));
    const auto r = static_cast<Eigen::Index>(k);
    A(r, 0) = 1.0;
    A(r, 1) = std::log(lt[k]);
    if (log_aware) A(r, 2) = std::log(std::log(lt[k]));
    b(r) = std::log(ly[k]);
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  fit.intercept = c(0);
  fit.exponent = c(1);
  if (log_aware) fit.log_power = c(2);
  fit.residual = std::sqrt((A * c - b).squaredNorm() / static_cast<double>(lt.size()));
  return fit;
}

std::vector<double> dyadic_slopes(const std::vector<double>& t, const std::vector<double>& y) {
  std::vector<double> s;
  for (std::size_t k = 1; k < t.size() && k < y.size(); ++k) {
    if (y[k] > 0.0 && y[k - 1] > 0.0)
      s.push_back(std::log(y[k] / y[k - 1]) / std::log(t[k] / t[k - 1]));
    else
      s.push_back(-std::numeric_limits<double>::infinity());
  }
  return s;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] < v[k - 1])) return false;
  return !v.empty();
}

}  // namespace rvm
