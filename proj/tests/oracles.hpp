#pragma once

// Reference computations that share no code with the library: spin matrices,
// matrix exponentials, coupling by lowering operators, rotation matrices.

#include <cmath>
#include <complex>
#include <map>
#include <utility>

#include <Eigen/Dense>

namespace oracle {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;

// Basis |j, m> with m ascending from -j.
inline MatrixXd spin_plus(int two_j) {
  const int d = two_j + 1;
  const double j = 0.5 * two_j;
  MatrixXd p = MatrixXd::Zero(d, d);
  for (int k = 0; k + 1 < d; ++k) {
    const double m = -j + k;
    p(k + 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  return p;
}

inline MatrixXd spin_z(int two_j) {
  const int d = two_j + 1;
  MatrixXd z = MatrixXd::Zero(d, d);
  for (int k = 0; k < d; ++k) z(k, k) = -0.5 * two_j + k;
  return z;
}

inline MatrixXcd spin_y(int two_j) {
  const MatrixXd p = spin_plus(two_j);
  return (p - p.transpose()).cast<std::complex<double>>() / std::complex<double>(0.0, 2.0);
}

// exp(-i t H) for Hermitian H.
inline MatrixXcd unitary_exp(const MatrixXcd& h, double t) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
  const Eigen::VectorXcd phases =
      (es.eigenvalues().cast<std::complex<double>>() * std::complex<double>(0.0, -t)).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// exp(-i alpha Jz) exp(-i beta Jy) exp(-i gamma Jz).
inline MatrixXcd rotation_operator(int two_j, double alpha, double beta, double gamma) {
  const MatrixXcd z = spin_z(two_j).cast<std::complex<double>>();
  return unitary_exp(z, alpha) * unitary_exp(spin_y(two_j), beta) * unitary_exp(z, gamma);
}

// <j1 m1; j2 m2 | J M> for all entries, by lowering from |J, J> and
// orthogonalising against the larger J; Condon-Shortley sign <j1 j1; j2 J-j1|J J> > 0.
class Coupling {
 public:
  Coupling(int two_j1, int two_j2) : two_j1_(two_j1), two_j2_(two_j2) {
    const int d1 = two_j1 + 1, d2 = two_j2 + 1;
    const MatrixXd lower = kron(spin_plus(two_j1).transpose(), MatrixXd::Identity(d2, d2)) +
                           kron(MatrixXd::Identity(d1, d1), spin_plus(two_j2).transpose());
    for (int two_J = two_j1 + two_j2; two_J >= std::abs(two_j1 - two_j2); two_J -= 2) {
      Eigen::VectorXd top = Eigen::VectorXd::Zero(d1 * d2);
      double best = -1.0;
      for (int k1 = 0; k1 < d1; ++k1) {
        for (int k2 = 0; k2 < d2; ++k2) {
          if (2 * k1 - two_j1 + 2 * k2 - two_j2 != two_J) continue;
          Eigen::VectorXd e = Eigen::VectorXd::Zero(d1 * d2);
          e(k1 * d2 + k2) = 1.0;
          for (int two_K = two_j1 + two_j2; two_K > two_J; two_K -= 2) {
            const Eigen::VectorXd& u = states_.at({two_K, two_J});
            e -= u.dot(e) * u;
          }
          if (e.norm() > best) {
            best = e.norm();
            top = e;
          }
        }
      }
      top.normalize();
      const int k_sign = (two_J - two_j1 + two_j2) / 2;
      if (top((d1 - 1) * d2 + k_sign) < 0) top = -top;
      Eigen::VectorXd v = top;
      for (int two_M = two_J; two_M >= -two_J; two_M -= 2) {
        states_[{two_J, two_M}] = v;
        const double J = 0.5 * two_J, M = 0.5 * two_M;
        if (two_M > -two_J) v = lower * v / std::sqrt(J * (J + 1) - M * (M - 1));
      }
    }
  }

  double operator()(int two_m1, int two_m2, int two_J, int two_M) const {
    const auto it = states_.find({two_J, two_M});
    if (it == states_.end() || two_m1 + two_m2 != two_M) return 0.0;
    const int k1 = (two_m1 + two_j1_) / 2, k2 = (two_m2 + two_j2_) / 2;
    return it->second(k1 * (two_j2_ + 1) + k2);
  }

 private:
  static MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
    MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i) {
      for (int k = 0; k < a.cols(); ++k) out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
    }
    return out;
  }

  int two_j1_, two_j2_;
  std::map<std::pair<int, int>, Eigen::VectorXd> states_;
};

inline Eigen::Matrix3d rot_z(double t) {
  Eigen::Matrix3d r;
  r << std::cos(t), -std::sin(t), 0, std::sin(t), std::cos(t), 0, 0, 0, 1;
  return r;
}

inline Eigen::Matrix3d rot_y(double t) {
  Eigen::Matrix3d r;
  r << std::cos(t), 0, std::sin(t), 0, 1, 0, -std::sin(t), 0, std::cos(t);
  return r;
}

inline Eigen::Matrix3d rotation_matrix(double alpha, double beta, double gamma) {
  return rot_z(alpha) * rot_y(beta) * rot_z(gamma);
}

// sum over the frame axes of |R e_a - R' e_a|^2.
inline double frame_error(const Eigen::Matrix3d& r, const Eigen::Matrix3d& rp) {
  return (r - rp).squaredNorm();
}

}  // namespace oracle
