#include "donaldson/forms.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace donaldson {

namespace {

struct BasisTables {
  std::array<std::vector<unsigned>, 5> masks;
  std::array<int, 16> index_of{};

  BasisTables() {
    // Lexicographic order of increasing multi-indices.
    for (int k = 0; k <= 4; ++k) {
      std::vector<unsigned>& out = masks[k];
      std::function<void(int, int, unsigned)> rec = [&](int start, int left,
                                                          unsigned m) {
        if (left == 0) {
          out.push_back(m);
          return;
        }
        for (int a = start; a < 4; ++a) rec(a + 1, left - 1, m | (1u << a));
      };
      rec(0, k, 0u);
      for (std::size_t c = 0; c < out.size(); ++c) index_of[out[c]] = int(c);
    }
  }
};

const BasisTables& tables() {
  static const BasisTables t;
  return t;
}

// Sign of e_I ^ e_J relative to e_{I u J}; 0 when I and J overlap.
int wedge_sign(unsigned i, unsigned j) {
  if (i & j) return 0;
  int inversions = 0;
  for (int p = 0; p < 4; ++p) {
    if (!((i >> p) & 1u)) continue;
    for (int q = 0; q < p; ++q) {
      if ((j >> q) & 1u) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

int index_of(unsigned mask) { return tables().index_of[mask]; }

void require_degree(const KForm& a, int degree, const char* what) {
  if (a.degree() != degree) {
    throw std::invalid_argument(std::string(what) + ": expected degree " +
                                std::to_string(degree) + ", got " +
                                std::to_string(a.degree()));
  }
}

}  // namespace

int component_count(int degree) {
  static constexpr std::array<int, 5> counts{1, 4, 6, 4, 1};
  if (degree < 0 || degree > 4) {
    throw std::invalid_argument("degree out of range: " +
                                std::to_string(degree));
  }
  return counts[degree];
}

unsigned basis_mask(int degree, int component) {
  return tables().masks.at(degree).at(component);
}

int component_index(std::initializer_list<int> axes) {
  unsigned mask = 0;
  int prev = 0;
  for (int a : axes) {
    if (a <= prev || a > 4) {
      throw std::invalid_argument("axes must be increasing in 1..4");
    }
    mask |= 1u << (a - 1);
    prev = a;
  }
  return index_of(mask);
}

void require_same_grid(const GridPtr& a, const GridPtr& b) {
  if (a != b && (!a || !b || a->n() != b->n())) {
    throw std::invalid_argument("fields live on different grids");
  }
}

// ---------------------------------------------------------------- KForm

KForm::KForm(GridPtr grid, int degree)
    : grid_(std::move(grid)), degree_(degree) {
  coeffs_.setZero(grid_->size(), component_count(degree));
}

KForm::KForm(GridPtr grid, int degree, Eigen::MatrixXd coeffs)
    : grid_(std::move(grid)), degree_(degree), coeffs_(std::move(coeffs)) {
  if (coeffs_.rows() != grid_->size() ||
      coeffs_.cols() != component_count(degree)) {
    throw std::invalid_argument("coefficient matrix shape does not match");
  }
}

KForm KForm::constant(GridPtr grid, int degree, const Eigen::VectorXd& values) {
  KForm out(grid, degree);
  if (values.size() != component_count(degree)) {
    throw std::invalid_argument("constant form: wrong component count");
  }
  for (int c = 0; c < values.size(); ++c) {
    out.coeffs_.col(c).setConstant(values(c));
  }
  return out;
}

KForm KForm::scalar(GridPtr grid, Eigen::VectorXd values) {
  return KForm(std::move(grid), 0, Eigen::MatrixXd(std::move(values)));
}

double KForm::max_abs() const { return coeffs_.cwiseAbs().maxCoeff(); }

bool KForm::all_finite() const { return coeffs_.allFinite(); }

KForm& KForm::operator+=(const KForm& other) {
  require_same_grid(grid_, other.grid_);
  if (degree_ != other.degree_) throw std::invalid_argument("degree mismatch");
  coeffs_ += other.coeffs_;
  return *this;
}

KForm& KForm::operator-=(const KForm& other) {
  require_same_grid(grid_, other.grid_);
  if (degree_ != other.degree_) throw std::invalid_argument("degree mismatch");
  coeffs_ -= other.coeffs_;
  return *this;
}

KForm& KForm::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

KForm operator+(KForm a, const KForm& b) { return a += b; }
KForm operator-(KForm a, const KForm& b) { return a -= b; }
KForm operator-(KForm a) { return a *= -1.0; }
KForm operator*(double s, KForm a) { return a *= s; }
KForm operator*(KForm a, double s) { return a *= s; }

// ---------------------------------------------------------- VectorField

VectorField::VectorField(GridPtr grid) : grid_(std::move(grid)) {
  comps_.setZero(grid_->size(), 4);
}

VectorField::VectorField(GridPtr grid, Eigen::MatrixXd components)
    : grid_(std::move(grid)), comps_(std::move(components)) {
  if (comps_.rows() != grid_->size() || comps_.cols() != 4) {
    throw std::invalid_argument("vector field shape does not match grid");
  }
}

VectorField VectorField::constant(GridPtr grid, const Eigen::Vector4d& v) {
  VectorField out(std::move(grid));
  out.comps_.rowwise() = v.transpose();
  return out;
}

double VectorField::max_abs() const { return comps_.cwiseAbs().maxCoeff(); }

VectorField& VectorField::operator+=(const VectorField& other) {
  require_same_grid(grid_, other.grid_);
  comps_ += other.comps_;
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  require_same_grid(grid_, other.grid_);
  comps_ -= other.comps_;
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  comps_ *= s;
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator-(VectorField a) { return a *= -1.0; }
VectorField operator*(double s, VectorField a) { return a *= s; }

// ------------------------------------------------------------- algebra

Eigen::VectorXd sample(const Grid4& grid,
                       const std::function<double(const Eigen::Vector4d&)>& f) {
  Eigen::VectorXd out(grid.size());
  Eigen::Vector4d x;
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    for (int a = 0; a < 4; ++a) x(a) = grid.coordinate(p, a);
    out(p) = f(x);
  }
  return out;
}

KForm volume_form(GridPtr grid) {
  return KForm::constant(std::move(grid), 4, Eigen::VectorXd::Ones(1));
}

KForm omega_std(GridPtr grid) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(6);
  v(component_index({1, 2})) = 1.0;
  v(component_index({3, 4})) = 1.0;
  return KForm::constant(std::move(grid), 2, v);
}

KForm wedge(const KForm& a, const KForm& b) {
  require_same_grid(a.grid(), b.grid());
  const int ka = a.degree();
  const int kb = b.degree();
  if (ka + kb > 4) throw std::invalid_argument("degree > 4");
  KForm out(a.grid(), ka + kb);
  for (int i = 0; i < component_count(ka); ++i) {
    const unsigned mi = basis_mask(ka, i);
    for (int j = 0; j < component_count(kb); ++j) {
      const unsigned mj = basis_mask(kb, j);
      const int s = wedge_sign(mi, mj);
      if (s == 0) continue;
      out.component(index_of(mi | mj)).array() +=
          double(s) * a.component(i).array() * b.component(j).array();
    }
  }
  return out;
}

KForm exterior_d(const KForm& a) {
  const int k = a.degree();
  if (k >= 4) throw std::invalid_argument("exterior_d: degree 4 input");
  const Grid4& grid = a.grid_ref();
  KForm out(a.grid(), k + 1);
  for (int i = 0; i < component_count(k); ++i) {
    const unsigned mi = basis_mask(k, i);
    const Eigen::VectorXd coeff = a.component(i);
    for (int axis = 0; axis < 4; ++axis) {
      const unsigned mj = 1u << axis;
      if (mi & mj) continue;
      const int s = wedge_sign(mj, mi);
      out.component(index_of(mi | mj)) += double(s) * partial(grid, coeff, axis);
    }
  }
  return out;
}

KForm interior(const VectorField& x, const KForm& a) {
  require_same_grid(x.grid(), a.grid());
  const int k = a.degree();
  if (k == 0) throw std::invalid_argument("interior: degree 0 input");
  KForm out(a.grid(), k - 1);
  for (int i = 0; i < component_count(k); ++i) {
    const unsigned mi = basis_mask(k, i);
    for (int axis = 0; axis < 4; ++axis) {
      if (!((mi >> axis) & 1u)) continue;
      // iota(d_j) dx^j ^ e_rest = e_rest; sign from moving dx^j to the front.
      const unsigned rest = mi & ~(1u << axis);
      const int s = wedge_sign(1u << axis, rest);
      out.component(index_of(rest)).array() +=
          double(s) * x.components().col(axis).array() * a.component(i).array();
    }
  }
  return out;
}

KForm star(const KForm& a) {
  const int k = a.degree();
  KForm out(a.grid(), 4 - k);
  for (int i = 0; i < component_count(k); ++i) {
    const unsigned mi = basis_mask(k, i);
    const unsigned mc = 0xFu & ~mi;
    out.component(index_of(mc)) = double(wedge_sign(mi, mc)) * a.component(i);
  }
  return out;
}

SelfDualSplit sd_split(const KForm& w) {
  require_degree(w, 2, "sd_split");
  const KForm sw = star(w);
  return {0.5 * (w + sw), 0.5 * (w - sw)};
}

KForm multiply(const KForm& f, const KForm& a) {
  require_degree(f, 0, "multiply");
  require_same_grid(f.grid(), a.grid());
  KForm out = a;
  out.coeffs().array().colwise() *= f.component(0).array();
  return out;
}

KForm pointwise_norm2(const KForm& a) {
  return KForm::scalar(a.grid(), a.coeffs().rowwise().squaredNorm());
}

KForm density(const KForm& top) {
  require_degree(top, 4, "density");
  return KForm::scalar(top.grid(), top.component(0));
}

KForm lie_derivative(const VectorField& x, const KForm& a) {
  KForm out(a.grid(), a.degree());
  if (a.degree() > 0) out += exterior_d(interior(x, a));
  if (a.degree() < 4) out += interior(x, exterior_d(a));
  return out;
}

VectorField covariant_derivative(const VectorField& x, const VectorField& y) {
  require_same_grid(x.grid(), y.grid());
  const Grid4& grid = *x.grid();
  VectorField out(x.grid());
  for (int axis = 0; axis < 4; ++axis) {
    const Eigen::ArrayXd xa = x.components().col(axis).array();
    for (int c = 0; c < 4; ++c) {
      const Eigen::VectorXd dy = partial(grid, y.components().col(c), axis);
      out.components().col(c).array() += xa * dy.array();
    }
  }
  return out;
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  return covariant_derivative(x, y) - covariant_derivative(y, x);
}

KForm flat(const VectorField& x) {
  return KForm(x.grid(), 1, x.components());
}

VectorField sharp(const KForm& one_form) {
  require_degree(one_form, 1, "sharp");
  return VectorField(one_form.grid(), one_form.coeffs());
}

KForm dot(const VectorField& x, const VectorField& y) {
  require_same_grid(x.grid(), y.grid());
  return KForm::scalar(
      x.grid(), x.components().cwiseProduct(y.components()).rowwise().sum());
}

double ordered_mean(const Eigen::VectorXd& v) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) sum += v(i);
  return sum / double(v.size());
}

double integrate(const KForm& top) {
  require_degree(top, 4, "integrate");
  return ordered_mean(top.component(0));
}

double integrate_scalar(const KForm& f) {
  require_degree(f, 0, "integrate_scalar");
  return ordered_mean(f.component(0));
}

}  // namespace donaldson
