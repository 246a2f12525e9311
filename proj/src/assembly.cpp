// Dense assembly of the interior penalty matrix by quadrature on cells and
// faces. Deliberately written without the Kronecker factorization so that
// it can serve as the reference for the matrix-free paths.

#include "vpmg/operator.hpp"

#include <cmath>
#include <stdexcept>

namespace vpmg {

namespace {

struct PointEval {
  std::vector<double> value;                // per local basis function
  std::vector<std::array<double, 3>> grad;  // physical gradient
};

// Evaluate all tensor-product basis functions of a cell at reference point t.
PointEval evaluate(const Basis1D& basis, int dim, double h,
                   const std::array<double, 3>& t) {
  const int n1 = basis.size();
  std::size_t dpc = 1;
  for (int d = 0; d < dim; ++d) dpc *= n1;
  std::array<std::vector<double>, 3> v, dv;
  for (int d = 0; d < dim; ++d) {
    v[d].resize(n1);
    dv[d].resize(n1);
    for (int i = 0; i < n1; ++i) {
      v[d][i] = basis.value(i, t[d]);
      dv[d][i] = basis.derivative(i, t[d]) / h;
    }
  }
  PointEval e;
  e.value.resize(dpc);
  e.grad.resize(dpc);
  for (std::size_t l = 0; l < dpc; ++l) {
    std::array<int, 3> idx{0, 0, 0};
    std::size_t rest = l;
    for (int d = 0; d < dim; ++d) {
      idx[d] = static_cast<int>(rest % n1);
      rest /= n1;
    }
    double val = 1.0;
    for (int d = 0; d < dim; ++d) val *= v[d][idx[d]];
    e.value[l] = val;
    for (int g = 0; g < 3; ++g) {
      double gv = g < dim ? 1.0 : 0.0;
      for (int d = 0; d < dim && g < dim; ++d)
        gv *= d == g ? dv[d][idx[d]] : v[d][idx[d]];
      e.grad[l][g] = gv;
    }
  }
  return e;
}

double dot(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace

Eigen::MatrixXd assemble(const MeshHierarchy& mesh, int level,
                         const Basis1D& basis, double penalty_factor) {
  const int dim = mesh.dim();
  const int n1 = basis.size();
  const int k = basis.degree();
  const double h = mesh.cell_size(level);
  std::size_t dpc = 1;
  for (int d = 0; d < dim; ++d) dpc *= n1;
  const std::size_t n = mesh.n_cells(level) * dpc;
  if (static_cast<double>(n) * static_cast<double>(n) > 4e8)
    throw std::length_error("dense assembly exceeds the 4e8 entry guard");

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  const Quadrature1D q = gauss_quadrature(n1);
  const int nq = static_cast<int>(q.points.size());
  const double gamma = penalty_factor * penalty_parameter(k, h, h);
  const double face_measure = std::pow(h, dim - 1);
  const double cell_measure = std::pow(h, dim);

  // cell terms
  int nq_cell = 1;
  for (int d = 0; d < dim; ++d) nq_cell *= nq;
  std::vector<PointEval> cell_points;
  std::vector<double> cell_weights;
  for (int p = 0; p < nq_cell; ++p) {
    std::array<double, 3> t{0, 0, 0};
    double w = 1.0;
    int rest = p;
    for (int d = 0; d < dim; ++d) {
      t[d] = q.points[rest % nq];
      w *= q.weights[rest % nq];
      rest /= nq;
    }
    cell_points.push_back(evaluate(basis, dim, h, t));
    cell_weights.push_back(w * cell_measure);
  }
  for (std::size_t c = 0; c < mesh.n_cells(level); ++c)
    for (int p = 0; p < nq_cell; ++p)
      for (std::size_t i = 0; i < dpc; ++i)
        for (std::size_t j = 0; j < dpc; ++j)
          a(c * dpc + i, c * dpc + j) +=
              cell_weights[p] * dot(cell_points[p].grad[i], cell_points[p].grad[j]);

  // face terms: for direction d, lower and upper face of each cell
  int nq_face = 1;
  for (int d = 0; d < dim - 1; ++d) nq_face *= nq;
  for (int d = 0; d < dim; ++d) {
    std::array<double, 3> normal{0, 0, 0};
    normal[d] = 1.0;  // normal of the lower-side cell
    for (int p = 0; p < nq_face; ++p) {
      std::array<double, 3> t{0, 0, 0};
      double w = face_measure;
      int rest = p;
      for (int e = 0; e < dim; ++e) {
        if (e == d) continue;
        t[e] = q.points[rest % nq];
        w *= q.weights[rest % nq];
        rest /= nq;
      }
      std::array<double, 3> t_lo = t, t_hi = t;
      t_lo[d] = 0.0;
      t_hi[d] = 1.0;
      const PointEval at_lo = evaluate(basis, dim, h, t_lo);
      const PointEval at_hi = evaluate(basis, dim, h, t_hi);

      for (std::size_t c = 0; c < mesh.n_cells(level); ++c) {
        const auto up = mesh.neighbor(level, c, d, 1);
        if (up) {
          // minus = c evaluated at its upper face, plus = up at its lower face
          const std::size_t cells[2] = {c, *up};
          const PointEval* ev[2] = {&at_hi, &at_lo};
          const double sign[2] = {1.0, -1.0};
          for (int sv = 0; sv < 2; ++sv)
            for (int su = 0; su < 2; ++su)
              for (std::size_t i = 0; i < dpc; ++i)
                for (std::size_t j = 0; j < dpc; ++j) {
                  std::array<double, 3> jv, ju;
                  for (int g = 0; g < 3; ++g) {
                    jv[g] = sign[sv] * ev[sv]->value[i] * normal[g];
                    ju[g] = sign[su] * ev[su]->value[j] * normal[g];
                  }
                  std::array<double, 3> avg_gu, avg_gv;
                  for (int g = 0; g < 3; ++g) {
                    avg_gu[g] = 0.5 * ev[su]->grad[j][g];
                    avg_gv[g] = 0.5 * ev[sv]->grad[i][g];
                  }
                  a(cells[sv] * dpc + i, cells[su] * dpc + j) +=
                      w * (gamma * dot(ju, jv) - dot(avg_gu, jv) - dot(ju, avg_gv));
                }
        } else {
          // upper domain boundary of c, outward normal +e_d
          for (std::size_t i = 0; i < dpc; ++i)
            for (std::size_t j = 0; j < dpc; ++j) {
              const double u = at_hi.value[j], v = at_hi.value[i];
              const double du = dot(at_hi.grad[j], normal);
              const double dv = dot(at_hi.grad[i], normal);
              a(c * dpc + i, c * dpc + j) +=
                  w * (gamma * u * v - du * v - u * dv);
            }
        }
        if (!mesh.neighbor(level, c, d, 0)) {
          // lower domain boundary, outward normal -e_d
          for (std::size_t i = 0; i < dpc; ++i)
            for (std::size_t j = 0; j < dpc; ++j) {
              const double u = at_lo.value[j], v = at_lo.value[i];
              const double du = -dot(at_lo.grad[j], normal);
              const double dv = -dot(at_lo.grad[i], normal);
              a(c * dpc + i, c * dpc + j) +=
                  w * (gamma * u * v - du * v - u * dv);
            }
        }
      }
    }
  }
  return a;
}

}  // namespace vpmg
