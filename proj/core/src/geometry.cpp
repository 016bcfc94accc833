#include "asym/geometry.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/LU>
#include <cmath>
#include <string>

namespace asym {
namespace {

using SmallMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

SmallMatrix to_eigen(const Mat& g, int n) {
  SmallMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g[i][j];
  return m;
}

void symmetrize(Mat& m, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double s = 0.5 * (m[i][j] + m[j][i]);
      m[i][j] = s;
      m[j][i] = s;
    }
}

// nabla^b_i h_jl stored as out[i][j][l].
Tensor3 background_derivative(const MetricJet& h, const Tensor3& gamma, int n) {
  Tensor3 out{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        double s = h.dg[i][j][l];
        for (int m = 0; m < n; ++m)
          s -= gamma[m][i][j] * h.g[m][l] + gamma[m][i][l] * h.g[j][m];
        out[i][j][l] = s;
      }
  return out;
}

}  // namespace

void require_same_point(const ChartPoint& a, const ChartPoint& b) {
  if (!(a == b)) throw ChartMismatch("jets are not attached to the same chart point");
}

Mat inverse_metric(const Mat& g, int n) {
  const SmallMatrix m = to_eigen(g, n);
  Eigen::LLT<SmallMatrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw DegenerateMetric("metric matrix is not positive definite");
  const double scale = m.diagonal().cwiseAbs().maxCoeff();
  const double pivot = llt.matrixL().toDenseMatrix().diagonal().minCoeff();
  if (!(pivot > 0.0) || pivot * pivot < 1e-300 * scale)
    throw DegenerateMetric("metric matrix is numerically singular");
  const SmallMatrix inv = llt.solve(SmallMatrix::Identity(n, n));
  Mat out{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i][j] = 0.5 * (inv(i, j) + inv(j, i));
  return out;
}

double determinant(const Mat& g, int n) { return to_eigen(g, n).determinant(); }

Tensor3 christoffel(const MetricJet& jet) {
  const int n = jet.dim();
  const Mat inv = inverse_metric(jet.g, n);
  Tensor3 gamma{};
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += inv[k][l] * (jet.dg[i][j][l] + jet.dg[j][i][l] - jet.dg[l][i][j]);
        gamma[k][i][j] = 0.5 * s;
        gamma[k][j][i] = 0.5 * s;
      }
  return gamma;
}

Connection connection(const MetricJet& jet) {
  const int n = jet.dim();
  Connection c;
  c.n = n;
  c.inv = inverse_metric(jet.g, n);
  c.gamma = christoffel(jet);
  // d_m Gamma^k_ij = -g^ka d_m g_ab Gamma^b_ij + 1/2 g^kl d_m C_lij
  for (int m = 0; m < n; ++m) {
    Mat a{};  // a[k][b] = g^ka d_m g_ab
    for (int k = 0; k < n; ++k)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int q = 0; q < n; ++q) s += c.inv[k][q] * jet.dg[m][q][b];
        a[k][b] = s;
      }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) {
            s -= a[k][l] * c.gamma[l][i][j];
            s += 0.5 * c.inv[k][l] *
                 (jet.ddg[m][i][j][l] + jet.ddg[m][j][i][l] - jet.ddg[m][l][i][j]);
          }
          c.dgamma[m][k][i][j] = s;
          c.dgamma[m][k][j][i] = s;
        }
  }
  return c;
}

CurvatureBundle curvature(const MetricJet& jet) {
  const int n = jet.dim();
  const Connection c = connection(jet);
  CurvatureBundle out;
  out.n = n;
  out.christoffel = c.gamma;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        s += c.dgamma[k][k][i][j] - c.dgamma[i][k][k][j];
        for (int l = 0; l < n; ++l)
          s += c.gamma[k][k][l] * c.gamma[l][i][j] - c.gamma[k][i][l] * c.gamma[l][k][j];
      }
      out.ricci[i][j] = s;
    }
  symmetrize(out.ricci, n);
  out.scal = trace(c.inv, out.ricci, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.einstein[i][j] = out.ricci[i][j] - 0.5 * out.scal * jet.g[i][j];
  if (is_polar(jet.at.chart)) {
    Mat mod{};
    const double shift = 0.5 * (n - 1) * (n - 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) mod[i][j] = out.einstein[i][j] - shift * jet.g[i][j];
    out.modified_einstein = mod;
  }
  return out;
}

RelativeCurvature curvature_relative(const MetricJet& g, const MetricJet& b,
                                     const MetricJet& h, double lambda) {
  require_same_point(g.at, b.at);
  require_same_point(g.at, h.at);
  const int n = g.dim();
  const Mat gi = inverse_metric(g.g, n);
  const Connection bc = connection(b);
  const Tensor3& gb = bc.gamma;

  const Tensor3 dh = background_derivative(h, gb, n);

  // d_m (nabla^b_i h_jl) stored as ddh[m][i][j][l].
  Tensor4 ddh{};
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          double s = h.ddg[m][i][j][l];
          for (int p = 0; p < n; ++p) {
            s -= bc.dgamma[m][p][i][j] * h.g[p][l] + gb[p][i][j] * h.dg[m][p][l];
            s -= bc.dgamma[m][p][i][l] * h.g[j][p] + gb[p][i][l] * h.dg[m][j][p];
          }
          ddh[m][i][j][l] = s;
        }

  // Difference tensor C^k_ij = Gamma(g)^k_ij - Gamma(b)^k_ij
  //   = 1/2 g^kl (nabla_i h_jl + nabla_j h_il - nabla_l h_ij)
  Tensor3 diff{};
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += gi[k][l] * (dh[i][j][l] + dh[j][i][l] - dh[l][i][j]);
        diff[k][i][j] = 0.5 * s;
        diff[k][j][i] = 0.5 * s;
      }

  // d_m C^k_ij = -g^ka d_m g_ab C^b_ij + 1/2 g^kl d_m K_lij
  Tensor4 ddiff{};
  for (int m = 0; m < n; ++m) {
    Mat a{};
    for (int k = 0; k < n; ++k)
      for (int q = 0; q < n; ++q) {
        double s = 0.0;
        for (int p = 0; p < n; ++p) s += gi[k][p] * g.dg[m][p][q];
        a[k][q] = s;
      }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) {
            s -= a[k][l] * diff[l][i][j];
            s += 0.5 * gi[k][l] * (ddh[m][i][j][l] + ddh[m][j][i][l] - ddh[m][l][i][j]);
          }
          ddiff[m][k][i][j] = s;
          ddiff[m][k][j][i] = s;
        }
  }

  // nabla^b_m C^k_ij
  auto cov_diff = [&](int m, int k, int i, int j) {
    double s = ddiff[m][k][i][j];
    for (int p = 0; p < n; ++p)
      s += gb[k][m][p] * diff[p][i][j] - gb[p][m][i] * diff[k][p][j] -
           gb[p][m][j] * diff[k][i][p];
    return s;
  };

  RelativeCurvature out;
  out.n = n;
  out.lambda = lambda;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        s += cov_diff(k, k, i, j) - cov_diff(i, k, k, j);
        for (int l = 0; l < n; ++l)
          s += diff[k][k][l] * diff[l][i][j] - diff[k][i][l] * diff[l][k][j];
      }
      out.delta_ricci[i][j] = s;
    }
  symmetrize(out.delta_ricci, n);

  const double tr_dric = trace(gi, out.delta_ricci, n);
  const double tr_h = trace(gi, h.g, n);
  const double ein = lambda * (n - 1);
  out.scal_shift = tr_dric - ein * tr_h;
  out.scal = lambda * n * (n - 1) + out.scal_shift;
  const double shift = 0.5 * (n - 1) * (n - 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.modified_einstein[i][j] = out.delta_ricci[i][j] - 0.5 * tr_dric * g.g[i][j] -
                                    ein * (h.g[i][j] - 0.5 * tr_h * g.g[i][j]);
      out.ricci[i][j] = ein * (g.g[i][j] - h.g[i][j]) + out.delta_ricci[i][j];
      out.einstein[i][j] = out.modified_einstein[i][j] - lambda * shift * g.g[i][j];
    }
  return out;
}

double divergence_vector(const MetricJet& jet, const VectorJet& x) {
  require_same_point(jet.at, x.at);
  const int n = jet.dim();
  const Tensor3 gamma = christoffel(jet);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    s += x.dx[i][i];
    for (int k = 0; k < n; ++k) s += gamma[i][i][k] * x.x[k];
  }
  return -s;
}

Vec divergence_symmetric2(const MetricJet& jet, const MetricJet& t) {
  require_same_point(jet.at, t.at);
  const int n = jet.dim();
  const Mat inv = inverse_metric(jet.g, n);
  const Tensor3 gamma = christoffel(jet);
  Vec out{};
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double cov = t.dg[i][k][j];
        for (int m = 0; m < n; ++m)
          cov -= gamma[m][i][k] * t.g[m][j] + gamma[m][i][j] * t.g[k][m];
        s += inv[i][k] * cov;
      }
    out[j] = -s;
  }
  return out;
}

KillingParts killing_operator(const MetricJet& jet, const VectorJet& x) {
  require_same_point(jet.at, x.at);
  const int n = jet.dim();
  const Tensor3 gamma = christoffel(jet);
  const Vec lowered = lower(jet.g, x.x, n);
  Mat cov{};  // nabla_i X_j
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += jet.dg[i][j][k] * x.x[k] + jet.g[j][k] * x.dx[i][k];
      for (int m = 0; m < n; ++m) s -= gamma[m][i][j] * lowered[m];
      cov[i][j] = s;
    }
  KillingParts out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.full[i][j] = 0.5 * (cov[i][j] + cov[j][i]);
  const double div = divergence_vector(jet, x);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.trace_free[i][j] = out.full[i][j] + div / n * jet.g[i][j];
  return out;
}

Mat hessian(const MetricJet& jet, const ScalarJet& v) {
  require_same_point(jet.at, v.at);
  const int n = jet.dim();
  const Tensor3 gamma = christoffel(jet);
  Mat out{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = v.hess[i][j];
      for (int k = 0; k < n; ++k) s -= gamma[k][i][j] * v.grad[k];
      out[i][j] = s;
    }
  symmetrize(out, n);
  return out;
}

double laplacian(const MetricJet& jet, const ScalarJet& v) {
  const int n = jet.dim();
  return -trace(inverse_metric(jet.g, n), hessian(jet, v), n);
}

Mat dscal_adjoint(const MetricJet& jet, const ScalarJet& v, const CurvatureBundle& curv) {
  const int n = jet.dim();
  const Mat hess = hessian(jet, v);
  const double lap = -trace(inverse_metric(jet.g, n), hess, n);
  Mat out{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[i][j] = hess[i][j] + lap * jet.g[i][j] - v.value * curv.ricci[i][j];
  return out;
}

}  // namespace asym
