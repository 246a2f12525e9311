#include "vpmg/operator.hpp"

#include "vpmg/patch_layout.hpp"

#include <stdexcept>
#include <string>

namespace vpmg {

int KroneckerCellOperator::size() const {
  int n = 1;
  for (int d = 0; d < dim; ++d) n *= static_cast<int>(mass[d].rows());
  return n;
}

Eigen::VectorXd KroneckerCellOperator::apply(const Eigen::VectorXd& x) const {
  if (x.size() != size())
    throw std::invalid_argument("cell vector has wrong length");
  std::array<DenseMatrix<double>, 3> m, l;
  for (int d = 0; d < dim; ++d) {
    m[d] = DenseMatrix<double>(mass[d]);
    l[d] = DenseMatrix<double>(stiffness[d]);
  }
  Eigen::VectorXd y(x.size());
  TensorScratch<double> scratch;
  for (int d = 0; d < dim; ++d) {
    std::array<const DenseMatrix<double>*, 3> f{&m[0], &m[1], &m[2]};
    f[d] = &l[d];
    apply_kronecker<double>(f, dim, x.data(), y.data(), d > 0, scratch);
  }
  return y;
}

KroneckerCellOperator cell_operator(int degree, int dim, double h,
                                    BasisKind kind) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("dim must be 2 or 3");
  const Basis1D basis = make_basis(kind, degree);
  const SipgBlocks1D b = sipg_blocks(basis, h);
  KroneckerCellOperator op;
  op.dim = dim;
  for (int d = 0; d < dim; ++d) {
    op.mass[d] = b.mass;
    op.stiffness[d] = b.volume;
  }
  return op;
}

template <typename Number>
GlobalOperator<Number>::GlobalOperator(const MeshHierarchy& mesh,
                                       const Basis1D& basis,
                                       double penalty_factor)
    : mesh_(&mesh), basis_(basis), penalty_factor_(penalty_factor), dofs_per_cell_(1) {
  for (int d = 0; d < mesh.dim(); ++d) dofs_per_cell_ *= basis.size();
  for (int level = 0; level < mesh.n_levels(); ++level) {
    const double h = mesh.cell_size(level);
    const SipgBlocks1D s = sipg_blocks(basis, h, penalty_factor);
    LevelBlocks<Number> b;
    b.level = level;
    b.h = h;
    b.mass = DenseMatrix<Number>(s.mass);
    b.minus_plus = DenseMatrix<Number>(s.minus_plus);
    b.plus_minus = DenseMatrix<Number>(s.plus_minus);
    b.minus_minus = DenseMatrix<Number>(s.minus_minus);
    b.plus_plus = DenseMatrix<Number>(s.plus_plus);
    for (int variant = 0; variant < 4; ++variant) {
      const bool lower = variant & 1;
      const bool upper = variant & 2;
      Eigen::MatrixXd self = s.volume;
      self += lower ? s.boundary_lower : s.plus_plus;
      self += upper ? s.boundary_upper : s.minus_minus;
      b.cell_self[variant] = DenseMatrix<Number>(self);
      const auto strip = assemble_sipg_1d(
          basis, 2, h, lower ? FaceTreatment::WeakDirichlet : FaceTreatment::None,
          upper ? FaceTreatment::WeakDirichlet : FaceTreatment::None,
          penalty_factor);
      b.strip[variant] = DenseMatrix<Number>(strip.values);
    }
    b.strip_mass = DenseMatrix<Number>(assemble_mass_1d(basis, 2, h).values);
    blocks_.push_back(std::move(b));
  }
}

template <typename Number>
void GlobalOperator<Number>::check(int level, std::size_t n_dst,
                                   std::size_t n_src) const {
  if (level < 0 || level >= mesh_->n_levels())
    throw std::out_of_range("level " + std::to_string(level) + " out of range");
  if (n_dst != n_dofs(level) || n_src != n_dofs(level))
    throw std::invalid_argument("vector length does not match level " +
                                std::to_string(level));
}

template <typename Number>
void GlobalOperator<Number>::vmult(int level, std::span<Number> dst,
                                   std::span<const Number> src) const {
  check(level, dst.size(), src.size());
  const std::size_t dpc = dofs_per_cell_;
  TensorScratch<Number> scratch;
  auto read = [&](std::size_t c) { return src.data() + c * dpc; };
  for (std::size_t c = 0; c < mesh_->n_cells(level); ++c)
    apply_cell(level, c, read, dst.data() + c * dpc, scratch);
}

template <typename Number>
void GlobalOperator<Number>::vmult_patchwise(int level, std::span<Number> dst,
                                             std::span<const Number> src) const {
  check(level, dst.size(), src.size());
  const int dim = mesh_->dim();
  const int n1 = basis_.size();
  const int ncells = mesh_->cells_per_direction(level);
  const std::size_t dpc = dofs_per_cell_;
  const LevelBlocks<Number>& b = blocks_[level];
  const PatchDoFLayout layout(dim, n1);

  std::fill(dst.begin(), dst.end(), Number(0));
  std::vector<Number> xp(layout.size()), yp(layout.size());
  std::vector<std::size_t> first(std::size_t{1} << dim);
  TensorScratch<Number> scratch;

  // Color-0 patches tile the mesh since the cell count per direction is even.
  for (const VertexPatch& patch : enumerate_patches(*mesh_, level)) {
    if (patch_color(patch, dim) != 0) continue;
    for (std::size_t s = 0; s < first.size(); ++s)
      first[s] = patch.cells[s] * dpc;
    layout.gather<Number>(first, src.data(), xp.data());

    // cells and faces inside the patch plus domain boundary faces
    for (int d = 0; d < dim; ++d) {
      const auto bd = patch.at_boundary(d, ncells);
      std::array<const DenseMatrix<Number>*, 3> f{&b.strip_mass, &b.strip_mass,
                                                  &b.strip_mass};
      f[d] = &b.strip[(bd[0] ? 1 : 0) + (bd[1] ? 2 : 0)];
      apply_kronecker<Number>(f, dim, xp.data(), yp.data(), d > 0, scratch);
    }
    layout.scatter_add<Number>(first, yp.data(), dst.data());

    // faces on the lower side of the patch, integrated from both sides
    for (int d = 0; d < dim; ++d) {
      if (patch.lowest[d] == 0) continue;
      for (std::size_t s = 0; s < first.size(); ++s) {
        if ((s >> d) & 1) continue;
        const std::size_t inner = patch.cells[s];
        const std::size_t outer = *mesh_->neighbor(level, inner, d, 0);
        const Number* x_in = src.data() + inner * dpc;
        const Number* x_out = src.data() + outer * dpc;
        Number* y_in = dst.data() + inner * dpc;
        Number* y_out = dst.data() + outer * dpc;
        std::array<const DenseMatrix<Number>*, 3> f{&b.mass, &b.mass, &b.mass};
        f[d] = &b.minus_minus;
        apply_kronecker<Number>(f, dim, x_out, y_out, true, scratch);
        f[d] = &b.minus_plus;
        apply_kronecker<Number>(f, dim, x_in, y_out, true, scratch);
        f[d] = &b.plus_minus;
        apply_kronecker<Number>(f, dim, x_out, y_in, true, scratch);
        f[d] = &b.plus_plus;
        apply_kronecker<Number>(f, dim, x_in, y_in, true, scratch);
      }
    }
  }
}

template <typename Number>
DoFVector<Number> GlobalOperator<Number>::apply(const DoFVector<Number>& x) const {
  DoFVector<Number> y(x.level, x.size());
  vmult(x.level, y.values, x.values);
  return y;
}

template <typename Number>
DoFVector<Number> GlobalOperator<Number>::apply_patchwise(
    const DoFVector<Number>& x) const {
  DoFVector<Number> y(x.level, x.size());
  vmult_patchwise(x.level, y.values, x.values);
  return y;
}

std::vector<double> assemble_rhs_constant(const MeshHierarchy& mesh, int level,
                                          const Basis1D& basis) {
  const int dim = mesh.dim();
  const int n1 = basis.size();
  const double h = mesh.cell_size(level);
  const Quadrature1D q = gauss_quadrature(n1);
  std::vector<double> w(n1, 0.0);
  for (int i = 0; i < n1; ++i)
    for (std::size_t p = 0; p < q.points.size(); ++p)
      w[i] += h * q.weights[p] * basis.value(i, q.points[p]);
  std::size_t dpc = 1;
  for (int d = 0; d < dim; ++d) dpc *= n1;
  std::vector<double> cell(dpc);
  for (std::size_t l = 0; l < dpc; ++l) {
    std::size_t rest = l;
    double v = 1.0;
    for (int d = 0; d < dim; ++d) {
      v *= w[rest % n1];
      rest /= n1;
    }
    cell[l] = v;
  }
  std::vector<double> b(mesh.n_cells(level) * dpc);
  for (std::size_t c = 0; c < mesh.n_cells(level); ++c)
    std::copy(cell.begin(), cell.end(), b.begin() + c * dpc);
  return b;
}

template class GlobalOperator<double>;
template class GlobalOperator<float>;

}  // namespace vpmg
