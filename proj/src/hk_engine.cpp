#include "kov/hk_engine.hpp"

#include <cmath>
#include <string>

namespace kov {

Matrix BilinearStepSystem::matrix(const StateVector& y, double eps) const {
  if (y.size() != dim) throw DimensionError("step system dimension does not match the state");
  return matrix_builder(y.coords(), eps);
}

BilinearStepSystem polarize(const QuadraticField& field) {
  const std::size_t n = field.dim();
  // Precompute, for every (i, m), the list of (other index, coefficient)
  // such that M_im(y) = sum coeff * y_other. A monomial a y_j y_k becomes
  // a (y_j y'_k + y'_j y_k), contributing a*y_j to column k and a*y_k to
  // column j (2 a y_j to column j when j == k).
  struct Entry {
    std::size_t row, col, other;
    double coeff;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = j; k < n; ++k) {
        const double a = field.coeff(i, j, k);
        if (a == 0.0) continue;
        entries.push_back({i, k, j, a});
        entries.push_back({i, j, k, a});
      }
    }
  }

  BilinearStepSystem sys;
  sys.dim = n;
  sys.scale = StepScale::two_eps;
  sys.matrix_builder = [n, entries = std::move(entries)](std::span<const double> y, double eps) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& e : entries) {
      m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) += e.coeff * y[e.other];
    }
    Matrix a = Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    a -= eps * m;
    return a;
  };
  return sys;
}

StateVector hk_step(const BilinearStepSystem& sys, const StateVector& y, double eps) {
  const Matrix a = sys.matrix(y, eps);
  Eigen::PartialPivLU<Matrix> lu(a);
  const double det = lu.determinant();
  const double bound = a.rowwise().norm().prod();
  if (!std::isfinite(det) || std::abs(det) < 1e-14 * bound) {
    throw SingularStepError("bilinear step matrix is singular", y.values(), eps);
  }
  const Eigen::Map<const Eigen::VectorXd> rhs(y.coords().data(),
                                              static_cast<Eigen::Index>(y.size()));
  Eigen::VectorXd next = lu.solve(rhs);
  // Two rounds of refinement with the residual accumulated in long double
  // bring the solve to the accuracy of the explicit closed forms.
  const Eigen::Index n = a.rows();
  for (int round = 0; round < 2 && next.allFinite(); ++round) {
    Eigen::VectorXd residual(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      long double acc = rhs(i);
      for (Eigen::Index j = 0; j < n; ++j) {
        acc -= static_cast<long double>(a(i, j)) * static_cast<long double>(next(j));
      }
      residual(i) = static_cast<double>(acc);
    }
    next += lu.solve(residual);
  }
  if (!next.allFinite()) {
    throw SingularStepError("bilinear step produced a non-finite state", y.values(), eps);
  }
  return StateVector(std::vector<double>(next.data(), next.data() + next.size()));
}

StateVector hk_inverse_step(const BilinearStepSystem& sys, const StateVector& y, double eps) {
  return hk_step(sys, y, -eps);
}

Matrix build_A_generalized_kov(std::size_t n, const StateVector& y, double eps) {
  if (y.size() != n) throw DimensionError("N does not match the state dimension");
  double s = 0.0;
  for (double v : y) s += v;
  const auto dim = static_cast<Eigen::Index>(n);
  Matrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double yi = y[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < dim; ++j) {
      a(i, j) = (i == j) ? 1.0 - eps * (-3.0 * yi + s) : -eps * yi;
    }
  }
  return a;
}

}  // namespace kov
