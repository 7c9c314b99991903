#include "kov/changevar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kov/numdiff.hpp"

namespace kov {

namespace {

void require_dim(const StateVector& v, std::size_t n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(std::string(what) + " expects N = " + std::to_string(n) + ", got " +
                         std::to_string(v.size()));
  }
}

void require_positive(const StateVector& v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) {
      throw DomainError(std::string(what) + " needs the positive orthant (coordinate " +
                        std::to_string(i + 1) + ")");
    }
  }
}

double max_abs_diff(const StateVector& a, const StateVector& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

ChangeOfVariables linear_cv() {
  return {"linear", 3,
          [](const StateVector& x) {
            require_dim(x, 3, "linear change of variables");
            return StateVector{(x[1] + x[2]) / 2.0, (x[2] + x[0]) / 2.0, (x[0] + x[1]) / 2.0};
          },
          [](const StateVector& y) {
            require_dim(y, 3, "linear change of variables");
            return StateVector{-y[0] + y[1] + y[2], y[0] - y[1] + y[2], y[0] + y[1] - y[2]};
          },
          "all of R^3"};
}

ChangeOfVariables nonlinear_cv3() {
  return {"nonlinear", 3,
          [](const StateVector& x) {
            require_dim(x, 3, "nonlinear change of variables");
            for (std::size_t i = 0; i < 3; ++i) {
              if (x[i] == 0.0) throw DomainError("nonlinear change of variables needs x_i != 0");
            }
            return StateVector{x[1] * x[2] / x[0], x[2] * x[0] / x[1], x[0] * x[1] / x[2]};
          },
          [](const StateVector& y) {
            require_dim(y, 3, "nonlinear change of variables");
            std::vector<double> x(3);
            for (std::size_t i = 0; i < 3; ++i) {
              const double r = y[(i + 1) % 3] * y[(i + 2) % 3];
              if (!(r > 0.0)) throw DomainError("inverse change of variables needs y_j y_k > 0");
              x[i] = std::sqrt(r);
            }
            return StateVector(std::move(x));
          },
          "x_i != 0 forward; y_j y_k > 0 backward, positive roots"};
}

ChangeOfVariables gen_cv(std::size_t n) {
  if (n < 3) throw DimensionError("change of variables needs N >= 3");
  return {"generalized", n,
          [n](const StateVector& x) {
            require_dim(x, n, "generalized change of variables");
            require_positive(x, "generalized change of variables");
            std::vector<double> y(n);
            for (std::size_t i = 0; i < n; ++i) {
              double p = 1.0;
              for (std::size_t j = 0; j < n; ++j) {
                if (j != i) p *= x[j];
              }
              y[i] = p / x[i];
            }
            return StateVector(std::move(y));
          },
          [n](const StateVector& y) {
            require_dim(y, n, "generalized change of variables");
            require_positive(y, "generalized change of variables");
            double p = 1.0;
            for (double v : y) p *= v;
            const double root = std::pow(p, 1.0 / (static_cast<double>(n) - 2.0));
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = std::sqrt(root / y[i]);
            return StateVector(std::move(x));
          },
          "positive orthant, positive roots"};
}

double jacobian_gen_cv(std::size_t n, const StateVector& x) {
  require_dim(x, n, "Jacobian of the change of variables");
  require_positive(x, "Jacobian of the change of variables");
  double p = 1.0;
  for (double v : x) p *= v;
  return std::pow(p, static_cast<double>(n) - 3.0);
}

double gen_cv_jacobian_factor(std::size_t n) {
  if (n < 3) throw DimensionError("change of variables needs N >= 3");
  return std::pow(-2.0, static_cast<double>(n) - 1.0) * (static_cast<double>(n) - 2.0);
}

double conjugacy_check(const ChangeOfVariables& cv, const DiscreteMap& upstream,
                       const DiscreteMap& downstream, const StateVector& x, double eps) {
  return max_abs_diff(cv.forward(upstream(x, eps)), downstream(cv.forward(x), eps));
}

double conjugacy_check(const ChangeOfVariables& cv, const FlowSpec& upstream,
                       const FlowSpec& downstream, const StateVector& x) {
  const Matrix jac = fd_jacobian(cv.forward, x);
  const StateVector f_up = upstream(x);
  const StateVector f_down = downstream(cv.forward(x));
  double worst = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double pushed = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      pushed += jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * f_up[j];
    }
    worst = std::max(worst, std::abs(pushed - f_down[i]));
    scale = std::max(scale, std::abs(f_down[i]));
  }
  return worst / scale;
}

}  // namespace kov
