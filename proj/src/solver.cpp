// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#include "cssw/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace cssw {
namespace {

constexpr std::size_t kMaxDim = 16;

inline double dot(const double* row, const double* z, std::size_t d) {
  double acc = 0.0;
  for (std::size_t c = 0; c < d; ++c) acc = std::fma(row[c], z[c], acc);
  return acc;
}

void check_sampling(const DisturbanceSampling& s, const Grid& grid,
                    const char* op) {
  if (s.atoms.empty() || s.atoms.size() != s.weights.size())
    throw std::invalid_argument(std::string(op) + ": malformed sampling");
  const std::size_t d = grid.dim();
  if (d > kMaxDim) throw std::invalid_argument(std::string(op) + ": dimension too large");
  for (const Matrix& w : s.atoms)
    if (w.rows() != d || w.cols() != d)
      throw std::invalid_argument(std::string(op) + ": atom shape mismatch");
}

void check_value(const Matrix& V, const Grid& grid, const char* op) {
  if (V.rows() == 0 || V.cols() != grid.dim())
    throw std::invalid_argument(std::string(op) + ": value shape mismatch");
}

// The sweep needs: sorted 1-d grid, augment-preserving atoms, and atom
// images of every grid point nondecreasing in the atom index. Monotonicity
// at both grid ends extends to the whole range since the image is affine
// in the grid coordinate. V itself carries no requirement; the piece table
// orders its rows.
bool sweep_applicable(const DisturbanceSampling& s, const Grid& grid,
                      std::vector<double>* shift, std::vector<double>* scale) {
  if (grid.dim() != 2 || !grid.sorted_1d()) return false;
  const std::size_t n = s.size();
  shift->resize(n);
  scale->resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Matrix& w = s.atoms[k];
    if (w(0, 0) != 1.0 || w(0, 1) != 0.0) return false;
    (*shift)[k] = w(1, 0);
    (*scale)[k] = w(1, 1);
  }
  const double lo = grid.point(0)[1];
  const double hi = grid.point(grid.size() - 1)[1];
  for (std::size_t k = 1; k < n; ++k) {
    const bool mono_lo = std::fma((*scale)[k], lo, (*shift)[k]) >=
                         std::fma((*scale)[k - 1], lo, (*shift)[k - 1]);
    const bool mono_hi = std::fma((*scale)[k], hi, (*shift)[k]) >=
                         std::fma((*scale)[k - 1], hi, (*shift)[k - 1]);
    if (!mono_lo || !mono_hi) return false;
  }
  return true;
}

Matrix expected_sweep(const Matrix& V, const DisturbanceSampling& s,
                      const Grid& grid, const std::vector<double>& shift,
                      const std::vector<double>& scale) {
  const Pieces1d pieces = Pieces1d::build(V);
  const double* pa = pieces.alpha.data();
  const double* pb = pieces.beta.data();
  const double* cut = pieces.cut.data();
  const std::size_t pieces_n = pieces.size();
  const std::size_t m = grid.size();
  const std::size_t n = s.size();
  const double* nu = s.weights.data();
  const double* c = shift.data();
  const double* sc = scale.data();
  Matrix out(m, 2);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
    const double y = grid.point(i)[1];
    // Four fixed accumulator lanes (k mod 4) break the fma dependency
    // chain; the lane split is static, so results do not depend on the
    // thread count.
    double a0[4] = {0.0, 0.0, 0.0, 0.0};
    double a1[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t e = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double yk = std::fma(sc[k], y, c[k]);
      // Images are nondecreasing in k, so the winning piece only moves up.
      while (e + 1 < pieces_n && yk >= cut[e + 1]) ++e;
      const std::size_t l = k & 3;
      a0[l] = std::fma(nu[k], std::fma(pb[e], c[k], pa[e]), a0[l]);
      a1[l] = std::fma(nu[k], pb[e] * sc[k], a1[l]);
    }
    out(i, 0) = (a0[0] + a0[1]) + (a0[2] + a0[3]);
    out(i, 1) = (a1[0] + a1[1]) + (a1[2] + a1[3]);
  }
  return out;
}

Matrix expected_generic(const Matrix& V, const DisturbanceSampling& s,
                        const Grid& grid) {
  const std::size_t m = grid.size();
  const std::size_t d = grid.dim();
  Matrix out(m, d);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const Matrix part = compose_linear(V, s.atoms[k], grid);
    const double nu = s.weights[k];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t c = 0; c < d; ++c)
        out(i, c) = std::fma(nu, part(i, c), out(i, c));
  }
  return out;
}

}  // namespace

Matrix expected_matrix(const Matrix& V, const DisturbanceSampling& s,
                       const Grid& grid) {
  check_value(V, grid, "expected_matrix");
  check_sampling(s, grid, "expected_matrix");
  std::vector<double> shift, scale;
  if (sweep_applicable(s, grid, &shift, &scale))
    return expected_sweep(V, s, grid, shift, scale);
  return expected_generic(V, s, grid);
}

Matrix expected_matrix_serial(const Matrix& V, const DisturbanceSampling& s,
                              const Grid& grid) {
  check_value(V, grid, "expected_matrix");
  check_sampling(s, grid, "expected_matrix");
  const std::size_t m = grid.size();
  const std::size_t d = grid.dim();
  Matrix out(m, d);
  Matrix prod(V.rows(), d);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const Matrix& w = s.atoms[k];
    for (std::size_t i = 0; i < V.rows(); ++i)
      for (std::size_t j = 0; j < d; ++j) {
        double acc = 0.0;
        for (std::size_t c = 0; c < d; ++c) acc = std::fma(V(i, c), w(c, j), acc);
        prod(i, j) = acc;
      }
    const Matrix part = row_rearrange_serial(prod, grid);
    const double nu = s.weights[k];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t c = 0; c < d; ++c)
        out(i, c) = std::fma(nu, part(i, c), out(i, c));
  }
  return out;
}

namespace {

struct Cand {
  double d2 = 0.0;
  std::uint32_t idx = 0;
};

inline bool cand_better(const Cand& a, const Cand& b) {
  return a.d2 < b.d2 || (a.d2 == b.d2 && a.idx < b.idx);
}

// Exact k-nearest-neighbor search over grid points (free coordinates).
// Ties resolve by lower point index; the selected set is the unique best
// set under the (distance, index) order.
class GridSearch {
 public:
  GridSearch(const Grid& grid) : grid_(&grid), fd_(grid.dim() - 1) {
    const std::size_t m = grid.size();
    if (grid.sorted_1d()) {
      sorted_ = true;
      return;
    }
    order_.resize(m);
    for (std::size_t i = 0; i < m; ++i) order_[i] = static_cast<std::uint32_t>(i);
    nodes_.reserve(2 * m / kLeaf + 2);
    root_ = build(0, m);
  }

  // x holds the free coordinates (dimension grid.dim() - 1).
  void query(const double* x, std::size_t nb, std::vector<Cand>& heap) const {
    heap.clear();
    if (sorted_) {
      query_sorted(x[0], nb, heap);
      return;
    }
    descend(root_, x, nb, heap);
  }

 private:
  static constexpr std::size_t kLeaf = 16;

  double coord(std::uint32_t p, std::size_t axis) const {
    return grid_->point(p)[axis + 1];
  }

  struct Node {
    std::uint32_t lo = 0, hi = 0;
    std::int32_t left = -1, right = -1;
    std::int32_t axis = -1;
    double split = 0.0;
  };

  std::int32_t build(std::size_t lo, std::size_t hi) {
    Node node;
    node.lo = static_cast<std::uint32_t>(lo);
    node.hi = static_cast<std::uint32_t>(hi);
    if (hi - lo > kLeaf) {
      // Split the widest side to keep cells roughly round.
      std::size_t axis = 0;
      double widest = -1.0;
      for (std::size_t a = 0; a < fd_; ++a) {
        double mn = coord(order_[lo], a), mx = mn;
        for (std::size_t i = lo + 1; i < hi; ++i) {
          const double v = coord(order_[i], a);
          mn = std::min(mn, v);
          mx = std::max(mx, v);
        }
        if (mx - mn > widest) {
          widest = mx - mn;
          axis = a;
        }
      }
      const std::size_t mid = (lo + hi) / 2;
      std::nth_element(order_.begin() + lo, order_.begin() + mid,
                       order_.begin() + hi,
                       [&](std::uint32_t a, std::uint32_t b) {
                         const double ca = coord(a, axis), cb = coord(b, axis);
                         return ca < cb || (ca == cb && a < b);
                       });
      node.axis = static_cast<std::int32_t>(axis);
      node.split = coord(order_[mid], axis);
      const std::int32_t self = static_cast<std::int32_t>(nodes_.size());
      nodes_.push_back(node);
      const std::int32_t l = build(lo, mid);
      const std::int32_t r = build(mid, hi);
      nodes_[self].left = l;
      nodes_[self].right = r;
      return self;
    }
    nodes_.push_back(node);
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  static void consider(const Cand& c, std::size_t nb, std::vector<Cand>& heap) {
    if (heap.size() < nb) {
      heap.push_back(c);
      std::push_heap(heap.begin(), heap.end(), cand_better);
    } else if (cand_better(c, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), cand_better);
      heap.back() = c;
      std::push_heap(heap.begin(), heap.end(), cand_better);
    }
  }

  void descend(std::int32_t ni, const double* x, std::size_t nb,
               std::vector<Cand>& heap) const {
    const Node& node = nodes_[static_cast<std::size_t>(ni)];
    if (node.axis < 0) {
      for (std::uint32_t i = node.lo; i < node.hi; ++i) {
        const std::uint32_t p = order_[i];
        double d2 = 0.0;
        for (std::size_t a = 0; a < fd_; ++a) {
          const double diff = x[a] - coord(p, a);
          d2 = std::fma(diff, diff, d2);
        }
        consider({d2, p}, nb, heap);
      }
      return;
    }
    const double delta = x[static_cast<std::size_t>(node.axis)] - node.split;
    const std::int32_t near = delta <= 0.0 ? node.left : node.right;
    const std::int32_t far = delta <= 0.0 ? node.right : node.left;
    descend(near, x, nb, heap);
    // Equality must still visit the far side or an equal-distance point
    // with a lower index could be missed.
    if (heap.size() < nb || delta * delta <= heap.front().d2)
      descend(far, x, nb, heap);
  }

  void query_sorted(double y, std::size_t nb, std::vector<Cand>& heap) const {
    const std::size_t m = grid_->size();
    std::size_t hi = 0;
    while (hi < m && grid_->point(hi)[1] <= y) ++hi;
    // Binary search equivalent; m can be large, so do it properly.
    {
      std::size_t lo = 0, up = m;
      while (lo < up) {
        const std::size_t mid = (lo + up) / 2;
        if (grid_->point(mid)[1] <= y)
          lo = mid + 1;
        else
          up = mid;
      }
      hi = lo;
    }
    std::size_t left = hi;  // first index with coordinate > y is hi
    for (std::size_t picked = 0; picked < nb; ++picked) {
      const bool has_l = left > 0;
      const bool has_r = hi < m;
      if (!has_l && !has_r) break;
      double dl = has_l ? y - grid_->point(left - 1)[1] : 0.0;
      double dr = has_r ? grid_->point(hi)[1] - y : 0.0;
      // Lower index wins distance ties, and the left point has the lower
      // index.
      if (has_l && (!has_r || dl * dl <= dr * dr)) {
        heap.push_back({dl * dl, static_cast<std::uint32_t>(left - 1)});
        --left;
      } else {
        heap.push_back({dr * dr, static_cast<std::uint32_t>(hi)});
        ++hi;
      }
    }
  }

  const Grid* grid_;
  std::size_t fd_;
  bool sorted_ = false;
  std::int32_t root_ = -1;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace

NeighborTable::NeighborTable(const Grid& grid, const DisturbanceSampling& s,
                             std::size_t neighbors)
    : nb_(neighbors), m_(grid.size()), d_(grid.dim()), n_(s.size()) {
  if (nb_ == 0) throw std::invalid_argument("neighbor table: need neighbors >= 1");
  check_sampling(s, grid, "neighbor table");
  if (nb_ >= m_) {
    nb_ = m_;
    exact_ = true;
    return;
  }

  GridSearch search(grid);

  // Nearest rows per (atom, point). Mapped points are recomputed from the
  // atoms on demand; only the indices are kept.
  std::vector<std::uint32_t> nn;
  if (nb_ == 1)
    nn.resize(n_ * m_);
  else
    cand_.resize(n_ * m_ * nb_);

#pragma omp parallel
  {
    std::vector<Cand> heap;
    std::vector<double> x(d_ - 1);
#pragma omp for schedule(static)
    for (std::ptrdiff_t ks = 0; ks < static_cast<std::ptrdiff_t>(n_); ++ks) {
      const std::size_t k = static_cast<std::size_t>(ks);
      const Matrix& w = s.atoms[k];
      for (std::size_t i = 0; i < m_; ++i) {
        const double* g = grid.point(i);
        for (std::size_t row = 1; row < d_; ++row)
          x[row - 1] = dot(w.row(row), g, d_);
        search.query(x.data(), nb_, heap);
        if (nb_ == 1) {
          nn[k * m_ + i] = heap.front().idx;
        } else {
          std::sort(heap.begin(), heap.end(),
                    [](const Cand& a, const Cand& b) { return a.idx < b.idx; });
          for (std::size_t c = 0; c < nb_; ++c)
            cand_[(k * m_ + i) * nb_ + c] = heap[c].idx;
        }
      }
    }
  }

  if (nb_ != 1) return;

  // Single-neighbor selections do not depend on the value matrix, so the
  // atoms collapse into per-point blocks A_ij = sum of nu_k W_k over the
  // atoms sent to row j; each epoch then costs one sparse product.
  std::vector<std::vector<std::uint32_t>> cols(m_);
  std::vector<std::vector<double>> blocks(m_);
  const std::size_t bsz = d_ * d_;
#pragma omp parallel
  {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs(n_);
#pragma omp for schedule(static)
    for (std::ptrdiff_t is = 0; is < static_cast<std::ptrdiff_t>(m_); ++is) {
      const std::size_t i = static_cast<std::size_t>(is);
      for (std::size_t k = 0; k < n_; ++k)
        pairs[k] = {nn[k * m_ + i], static_cast<std::uint32_t>(k)};
      std::sort(pairs.begin(), pairs.end());
      std::vector<std::uint32_t>& ci = cols[i];
      std::vector<double>& bi = blocks[i];
      for (std::size_t e = 0; e < n_; ++e) {
        if (ci.empty() || ci.back() != pairs[e].first) {
          ci.push_back(pairs[e].first);
          bi.insert(bi.end(), bsz, 0.0);
        }
        double* b = bi.data() + (ci.size() - 1) * bsz;
        const std::size_t k = pairs[e].second;
        const Matrix& w = s.atoms[k];
        const double nu = s.weights[k];
        for (std::size_t c = 0; c < bsz; ++c)
          b[c] = std::fma(nu, w.data()[c], b[c]);
      }
    }
  }

  ptr_.assign(m_ + 1, 0);
  for (std::size_t i = 0; i < m_; ++i) ptr_[i + 1] = ptr_[i] + cols[i].size();
  idx_.resize(ptr_[m_]);
  block_.resize(ptr_[m_] * bsz);
  for (std::size_t i = 0; i < m_; ++i) {
    std::copy(cols[i].begin(), cols[i].end(), idx_.begin() + ptr_[i]);
    std::copy(blocks[i].begin(), blocks[i].end(),
              block_.begin() + ptr_[i] * bsz);
  }
}

Matrix expected_matrix_fast(const Matrix& V, const DisturbanceSampling& s,
                            const Grid& grid, const NeighborTable& table) {
  if (table.exact_) return expected_matrix(V, s, grid);
  check_sampling(s, grid, "expected_matrix_fast");
  if (V.rows() != grid.size() || V.cols() != grid.dim())
    throw std::invalid_argument("expected_matrix_fast: value must be grid-aligned");
  if (table.m_ != grid.size() || table.d_ != grid.dim() || table.n_ != s.size())
    throw std::invalid_argument("expected_matrix_fast: table mismatch");
  const std::size_t m = table.m_;
  const std::size_t d = table.d_;
  Matrix out(m, d);

  if (table.nb_ == 1) {
    const std::size_t bsz = d * d;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t is = 0; is < static_cast<std::ptrdiff_t>(m); ++is) {
      const std::size_t i = static_cast<std::size_t>(is);
      double acc[kMaxDim] = {0.0};
      for (std::size_t e = table.ptr_[i]; e < table.ptr_[i + 1]; ++e) {
        const double* vr = V.row(table.idx_[e]);
        const double* b = table.block_.data() + e * bsz;
        for (std::size_t rc = 0; rc < d; ++rc) {
          const double vv = vr[rc];
          for (std::size_t cc = 0; cc < d; ++cc)
            acc[cc] = std::fma(vv, b[rc * d + cc], acc[cc]);
        }
      }
      for (std::size_t cc = 0; cc < d; ++cc) out(i, cc) = acc[cc];
    }
    return out;
  }

#pragma omp parallel
  {
    std::vector<double> x(d);
#pragma omp for schedule(static)
    for (std::ptrdiff_t is = 0; is < static_cast<std::ptrdiff_t>(m); ++is) {
      const std::size_t i = static_cast<std::size_t>(is);
      const double* g = grid.point(i);
      double acc[kMaxDim] = {0.0};
      for (std::size_t k = 0; k < table.n_; ++k) {
        const Matrix& w = s.atoms[k];
        for (std::size_t row = 0; row < d; ++row) x[row] = dot(w.row(row), g, d);
        const std::uint32_t* cand = table.cand_.data() + (k * m + i) * table.nb_;
        std::uint32_t pick = cand[0];
        double best = dot(V.row(pick), x.data(), d);
        for (std::size_t c = 1; c < table.nb_; ++c) {
          const double v = dot(V.row(cand[c]), x.data(), d);
          if (v > best) {
            best = v;
            pick = cand[c];
          }
        }
        const double* vr = V.row(pick);
        const double nu = s.weights[k];
        for (std::size_t cc = 0; cc < d; ++cc) {
          double comp = 0.0;
          for (std::size_t rc = 0; rc < d; ++rc)
            comp = std::fma(vr[rc], w(rc, cc), comp);
          acc[cc] = std::fma(nu, comp, acc[cc]);
        }
      }
      for (std::size_t cc = 0; cc < d; ++cc) out(i, cc) = acc[cc];
    }
  }
  return out;
}

void backward_induction(const ResourceModel& model, const Grid& grid,
                        const DisturbanceSampling& sampling, ValueStore& store,
                        const SolveOptions& options) {
  if (grid.dim() != model.state_spec().dim)
    throw std::invalid_argument("backward_induction: grid dimension mismatch");
  check_sampling(sampling, grid, "backward_induction");
  const int T = model.num_epochs();
  const std::size_t np = model.num_positions();
  const std::size_t m = grid.size();
  const std::size_t d = grid.dim();
  const ValueDims& dims = store.dims();
  if (dims.horizon != T || dims.positions != np || dims.grid_size != m ||
      dims.dim != d)
    throw std::invalid_argument("backward_induction: store dimension mismatch");

  const bool fast = options.fast;
  NeighborTable table =
      fast ? NeighborTable(grid, sampling, options.neighbors)
           : NeighborTable(grid, sampling, m);  // exact placeholder

  auto bellman_target = [&](int t, std::size_t pi,
                            const std::vector<Matrix>* cont) {
    const Position p = model.position_at(pi);
    Matrix bound(3 * m, d);
    for (int ai = 0; ai < 3; ++ai) {
      const auto a = static_cast<Action>(ai);
      Matrix env = model.envelope_matrix(t, p, a, grid);
      if (cont != nullptr) {
        for (const Transition& tr : model.transitions(pi, a)) {
          const Matrix& c = (*cont)[tr.target];
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t cc = 0; cc < d; ++cc)
              env(i, cc) = std::fma(tr.prob, c(i, cc), env(i, cc));
        }
      }
      std::memcpy(bound.row(static_cast<std::size_t>(ai) * m), env.data(),
                  m * d * sizeof(double));
    }
    return row_rearrange(bound, grid);
  };

  std::vector<Matrix> value_next;
  value_next.reserve(np);
  for (std::size_t pi = 0; pi < np; ++pi)
    value_next.push_back(bellman_target(T, pi, nullptr));
  store.put_value(T, value_next);
  if (options.on_epoch) options.on_epoch(T);

  std::vector<Matrix> cont(np, Matrix(1, 1));
  std::vector<Matrix> value_cur(np, Matrix(1, 1));
  for (int t = T - 1; t >= 0; --t) {
    for (std::size_t pi = 0; pi < np; ++pi)
      cont[pi] = fast ? expected_matrix_fast(value_next[pi], sampling, grid, table)
                      : expected_matrix(value_next[pi], sampling, grid);
    store.put_continuation(t + 1, cont);
    for (std::size_t pi = 0; pi < np; ++pi)
      value_cur[pi] = bellman_target(t, pi, &cont);
    store.put_value(t, value_cur);
    std::swap(value_next, value_cur);
    if (options.on_epoch) options.on_epoch(t);
  }
}

Action policy_action(const ResourceModel& model,
                     const std::vector<Matrix>& cont_next, int t, Position p,
                     const double* z) {
  if (t < 0 || t >= model.num_epochs())
    throw std::out_of_range("policy_action: epoch out of range");
  if (cont_next.size() != model.num_positions())
    throw std::invalid_argument("policy_action: continuation slice mismatch");
  const RewardParts parts = model.reward_parts(t, z);
  const std::size_t pi = ResourceModel::position_index(p);
  Action best_a = Action::abandon;
  double best = -std::numeric_limits<double>::infinity();
  for (int ai = 0; ai < 3; ++ai) {
    const auto a = static_cast<Action>(ai);
    double q = model.assemble_reward(t, parts, p, a);
    for (const Transition& tr : model.transitions(pi, a))
      q = std::fma(tr.prob, evaluate(cont_next[tr.target], z), q);
    if (q > best) {
      best = q;
      best_a = a;
    }
  }
  return best_a;
}

std::vector<PolicyThreshold> policy_boundaries(
    const ResourceModel& model, const std::vector<Matrix>& cont_next, int t,
    const Grid& grid, Mode mode) {
  if (t < 0 || t >= model.num_epochs())
    throw std::out_of_range("policy_boundaries: epoch out of range");
  if (!grid.sorted_1d())
    throw std::invalid_argument("policy_boundaries: need a sorted 1-d price grid");
  if (cont_next.size() != model.num_positions())
    throw std::invalid_argument("policy_boundaries: continuation slice mismatch");
  const std::size_t np = model.num_positions();
  const std::size_t m = grid.size();

  // Continuations evaluated once per (position, grid point); every reserve
  // level reuses the table.
  std::vector<double> cv(np * m);
  for (std::size_t pi = 0; pi < np; ++pi) {
    const Evaluator ev(cont_next[pi]);
    for (std::size_t i = 0; i < m; ++i) cv[pi * m + i] = ev.eval1(grid.point(i)[1]);
  }
  std::vector<RewardParts> parts(m);
  for (std::size_t i = 0; i < m; ++i) parts[i] = model.reward_parts(t, grid.point(i));

  std::vector<PolicyThreshold> out;
  for (int reserve = 1; reserve <= model.econ().max_reserve; ++reserve) {
    const Position p{reserve, mode};
    const std::size_t pi = ResourceModel::position_index(p);
    Action prev = Action::abandon;
    for (std::size_t i = 0; i < m; ++i) {
      Action best_a = Action::abandon;
      double best = -std::numeric_limits<double>::infinity();
      for (int ai = 0; ai < 3; ++ai) {
        const auto a = static_cast<Action>(ai);
        double q = model.assemble_reward(t, parts[i], p, a);
        for (const Transition& tr : model.transitions(pi, a))
          q = std::fma(tr.prob, cv[tr.target * m + i], q);
        if (q > best) {
          best = q;
          best_a = a;
        }
      }
      if (i > 0 && best_a != prev)
        out.push_back({reserve, mode, parts[i].price, prev, best_a});
      prev = best_a;
    }
  }
  return out;
}

}  // namespace cssw
