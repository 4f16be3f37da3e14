#include "cmefsp/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace cmefsp {

namespace {

constexpr std::size_t kNoIndex = static_cast<std::size_t>(-1);

using Entry = SparseGenerator::Entry;

// Off-diagonal entries of the column for state x: one accumulation per
// distinct in-space target, in reaction order, then sorted by row. Both
// assemble and update build columns through here so entries match bitwise.
std::vector<Entry> column_offdiag(const StateSpace& space, const ReactionNetwork& network,
                                  const State& x) {
  std::vector<Entry> entries;
  State target(x.size());
  for (std::size_t k = 0; k < network.n_reactions(); ++k) {
    const double a = network.propensity(k, x);
    if (a <= 0.0) continue;
    const State& nu = network.change_vector(k);
    for (std::size_t s = 0; s < x.size(); ++s) target[s] = x[s] + nu[s];
    const auto row = space.find(target);
    if (!row) continue;
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const Entry& e) { return e.row == *row; });
    if (it != entries.end()) {
      it->rate += a;
    } else {
      entries.push_back({*row, a});
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.row < b.row; });
  return entries;
}

// Canonical closed-mode diagonal: -(sum of the row-sorted off-diagonals).
double closed_diagonal(const std::vector<Entry>& offdiag) {
  double s = 0.0;
  for (const Entry& e : offdiag) s += e.rate;
  return -s;
}

void insert_diagonal(std::vector<Entry>& column, std::size_t j, double diag) {
  if (diag == 0.0) return;
  auto it = std::lower_bound(column.begin(), column.end(), j,
                             [](const Entry& e, std::size_t row) { return e.row < row; });
  column.insert(it, Entry{j, diag});
}

}  // namespace

std::size_t SparseGenerator::entry_count() const {
  std::size_t n = 0;
  for (const auto& col : columns_) n += col.size();
  return n;
}

double SparseGenerator::entry(std::size_t row, std::size_t col) const {
  for (const Entry& e : columns_[col]) {
    if (e.row == row) return e.rate;
  }
  return 0.0;
}

double SparseGenerator::column_sum(std::size_t col) const {
  double s = 0.0;
  for (const Entry& e : columns_[col]) s += e.rate;
  return s;
}

double SparseGenerator::one_norm() const {
  double norm = 0.0;
  for (const auto& col : columns_) {
    double s = 0.0;
    for (const Entry& e : col) s += std::abs(e.rate);
    norm = std::max(norm, s);
  }
  return norm;
}

void SparseGenerator::apply(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    for (const Entry& e : columns_[j]) y[e.row] += e.rate * xj;
  }
}

std::vector<double> SparseGenerator::apply(std::span<const double> x) const {
  std::vector<double> y(dimension());
  apply(x, y);
  return y;
}

void SparseGenerator::dump_coordinate(std::ostream& os) const {
  char buf[64];
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    for (const Entry& e : columns_[j]) {
      std::snprintf(buf, sizeof(buf), "%.17g", e.rate);
      os << e.row << ' ' << j << ' ' << buf << '\n';
    }
  }
}

void SparseGenerator::check_generation(const StateSpace& space) const {
  if (generation_ != space.generation() || dimension() != space.size()) {
    throw StaleSpaceError("generator generation " + std::to_string(generation_) +
                          " does not match state space generation " +
                          std::to_string(space.generation()));
  }
}

SparseGenerator assemble(const StateSpace& space, const ReactionNetwork& network,
                         BoundaryMode mode) {
  if (space.empty()) {
    throw InvalidArgumentError("assemble: state space is empty");
  }
  std::vector<std::vector<Entry>> columns(space.size());
  for (std::size_t j = 0; j < space.size(); ++j) {
    const State& x = space[j];
    std::vector<Entry> col = column_offdiag(space, network, x);
    const double diag = (mode == BoundaryMode::Closed) ? closed_diagonal(col)
                                                       : -network.total_propensity(x);
    insert_diagonal(col, j, diag);
    columns[j] = std::move(col);
  }
  return SparseGenerator(std::move(columns), mode, space.generation());
}

SparseGenerator update_generator(const SparseGenerator& A, const StateSpace& space_after,
                                 std::span<const std::size_t> removed_old_positions,
                                 std::span<const State> added,
                                 const ReactionNetwork& network) {
  const std::size_t n_old = A.dimension();
  const std::size_t n_removed = removed_old_positions.size();
  if (n_removed > n_old) {
    throw InvalidArgumentError("update_generator: more removals than columns");
  }
  const std::size_t n_ret = n_old - n_removed;
  const std::size_t n_new = space_after.size();
  if (n_ret + added.size() != n_new) {
    throw StaleSpaceError("update_generator: space_after size " + std::to_string(n_new) +
                          " inconsistent with " + std::to_string(n_ret) + " retained + " +
                          std::to_string(added.size()) + " added states");
  }
  for (std::size_t a = 0; a < added.size(); ++a) {
    if (space_after[n_ret + a] != added[a]) {
      throw StaleSpaceError("update_generator: added states do not match space_after tail");
    }
  }

  // Old position -> new position for survivors; kNoIndex for removed.
  std::vector<std::size_t> remap(n_old);
  {
    std::size_t next_removed = 0;
    std::size_t write = 0;
    for (std::size_t j = 0; j < n_old; ++j) {
      if (next_removed < n_removed && removed_old_positions[next_removed] == j) {
        remap[j] = kNoIndex;
        ++next_removed;
        continue;
      }
      remap[j] = write++;
    }
    if (next_removed != n_removed) {
      throw InvalidArgumentError(
          "update_generator: removed positions not strictly ascending / in range");
    }
  }

  std::vector<std::vector<Entry>> columns(n_new);
  std::vector<double> retained_diag(n_ret, 0.0);

  // Surviving columns: copy surviving off-diagonal entries (renumbering keeps
  // them row-sorted), remember the old diagonal for absorbing mode.
  for (std::size_t j_old = 0; j_old < n_old; ++j_old) {
    const std::size_t j = remap[j_old];
    if (j == kNoIndex) continue;
    auto& col = columns[j];
    for (const Entry& e : A.column(j_old)) {
      if (e.row == j_old) {
        retained_diag[j] = e.rate;
        continue;
      }
      const std::size_t row = remap[e.row];
      if (row == kNoIndex) continue;
      col.push_back({row, e.rate});
    }
  }

  // New columns for the added states (covers added -> retained and
  // added -> added transitions).
  for (std::size_t a = 0; a < added.size(); ++a) {
    columns[n_ret + a] = column_offdiag(space_after, network, added[a]);
  }

  // Transitions from retained states into the added states. Added-to-added
  // were handled above; the check on idx_src filters them out.
  {
    State source(space_after.n_species());
    for (std::size_t a = 0; a < added.size(); ++a) {
      const std::size_t target_row = n_ret + a;
      const State& x_new = added[a];
      for (std::size_t k = 0; k < network.n_reactions(); ++k) {
        const State& nu = network.change_vector(k);
        bool nonneg = true;
        for (std::size_t s = 0; s < source.size(); ++s) {
          source[s] = x_new[s] - nu[s];
          nonneg &= (source[s] >= 0);
        }
        if (!nonneg) continue;
        const auto idx_src = space_after.find(source);
        if (!idx_src || *idx_src >= n_ret) continue;
        const double rate = network.propensity(k, source);
        if (rate <= 0.0) continue;
        auto& col = columns[*idx_src];
        auto it = std::find_if(col.rbegin(), col.rend(),
                               [&](const Entry& e) { return e.row == target_row; });
        if (it != col.rend()) {
          it->rate += rate;
        } else {
          col.push_back({target_row, rate});
        }
      }
    }
  }

  // Cross entries were appended after the copied block; added rows all sit
  // above n_ret, so sorting the tail restores row order cheaply.
  for (std::size_t j = 0; j < n_ret; ++j) {
    auto& col = columns[j];
    auto tail = std::find_if(col.begin(), col.end(),
                             [&](const Entry& e) { return e.row >= n_ret; });
    std::sort(tail, col.end(), [](const Entry& a, const Entry& b) { return a.row < b.row; });
  }

  // Diagonals last: closed mode recomputes from the final off-diagonal sets,
  // absorbing mode reuses retained diagonals (total outflow is a property of
  // the state alone) and computes fresh ones for added states.
  for (std::size_t j = 0; j < n_new; ++j) {
    double diag;
    if (A.boundary_mode() == BoundaryMode::Closed) {
      diag = closed_diagonal(columns[j]);
    } else if (j < n_ret) {
      diag = retained_diag[j];
    } else {
      diag = -network.total_propensity(space_after[j]);
    }
    insert_diagonal(columns[j], j, diag);
  }

  return SparseGenerator(std::move(columns), A.boundary_mode(), space_after.generation());
}

ProbabilityVector embed(const ProbabilityVector& p_old, const StateSpace& space_old,
                        const StateSpace& space_new) {
  p_old.check_generation(space_old);
  std::vector<double> w(space_new.size(), 0.0);
  for (std::size_t j = 0; j < space_new.size(); ++j) {
    const auto idx = space_old.find(space_new[j]);
    if (idx) w[j] = p_old[*idx];
  }
  return ProbabilityVector(std::move(w), space_new.generation());
}

}  // namespace cmefsp
