#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "schurand/util.hpp"

namespace schurand {

// Partition of n: weakly decreasing positive parts. Labels both the S_n
// irrep sector S^lambda and (padded to d rows) the paired SU(d) irrep.
struct Partition {
  std::vector<int> parts;

  Partition() = default;
  explicit Partition(std::vector<int> p) : parts(std::move(p)) {}

  int n() const {
    int s = 0;
    for (int p : parts) s += p;
    return s;
  }
  int rows() const { return static_cast<int>(parts.size()); }

  bool valid() const {
    if (parts.empty()) return false;
    for (size_t i = 0; i < parts.size(); ++i) {
      if (parts[i] <= 0) return false;
      if (i > 0 && parts[i] > parts[i - 1]) return false;
    }
    return true;
  }

  bool operator==(const Partition& o) const { return parts == o.parts; }
  bool operator!=(const Partition& o) const { return parts != o.parts; }
  // Ordering used for map keys only; sector order is descending lex.
  bool operator<(const Partition& o) const { return parts < o.parts; }

  std::string to_string() const {
    std::string s;
    for (size_t i = 0; i < parts.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(parts[i]);
    }
    return s;
  }

  static Partition parse(const std::string& text) {
    std::vector<int> parts;
    size_t pos = 0;
    while (pos < text.size()) {
      size_t next = text.find(',', pos);
      if (next == std::string::npos) next = text.size();
      parts.push_back(std::stoi(text.substr(pos, next - pos)));
      pos = next + 1;
    }
    Partition lam(parts);
    if (!lam.valid()) throw std::invalid_argument("not a valid partition: " + text);
    return lam;
  }
};

namespace detail {

inline __int128 checked_factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of negative argument");
  if (n > 33) throw std::overflow_error("factorial exceeds 128-bit range");
  __int128 f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline long long to_int64_checked(__int128 v, const char* what) {
  if (v > static_cast<__int128>(INT64_MAX) || v < -static_cast<__int128>(INT64_MAX))
    throw std::overflow_error(std::string(what) + " exceeds 64-bit range");
  return static_cast<long long>(v);
}

inline void enumerate_partitions_rec(int remaining, int max_part, int rows_left,
                                     std::vector<int>& acc, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(acc);
    return;
  }
  if (rows_left == 0) return;
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    // Feasibility: the remaining rows can hold at most rows_left*p boxes.
    if (static_cast<long long>(p) * rows_left < remaining) break;
    acc.push_back(p);
    enumerate_partitions_rec(remaining - p, p, rows_left - 1, acc, out);
    acc.pop_back();
  }
}

}  // namespace detail

// All partitions of n with at most max_rows rows, descending lexicographic.
// This is the canonical sector order used everywhere downstream.
inline std::vector<Partition> enumerate_partitions(int n, int max_rows) {
  if (n < 1 || max_rows < 1) throw std::invalid_argument("enumerate_partitions: n and max_rows must be >= 1");
  std::vector<Partition> out;
  std::vector<int> acc;
  detail::enumerate_partitions_rec(n, n, max_rows, acc, out);
  return out;
}

// Hook length of box (r, c) (0-based) in shape lambda.
inline int hook_length(const Partition& lam, int r, int c) {
  int arm = lam.parts[r] - c - 1;
  int leg = 0;
  for (int i = r + 1; i < lam.rows(); ++i)
    if (lam.parts[i] > c) ++leg;
  return arm + leg + 1;
}

// d_lambda = n! / prod(hooks). Exact integer arithmetic, overflow-checked.
inline long long hook_dimension(const Partition& lam) {
  if (!lam.valid()) throw std::invalid_argument("hook_dimension: invalid partition");
  int n = lam.n();
  __int128 hooks = 1;
  for (int r = 0; r < lam.rows(); ++r)
    for (int c = 0; c < lam.parts[r]; ++c) hooks *= hook_length(lam, r, c);
  __int128 dim = detail::checked_factorial(n) / hooks;
  return detail::to_int64_checked(dim, "hook dimension");
}

// m_lambda = dim of the paired SU(d) irrep: Weyl formula on lambda padded to
// d rows. Zero when lambda has more than d rows.
inline long long weyl_multiplicity(const Partition& lam, int d) {
  if (!lam.valid()) throw std::invalid_argument("weyl_multiplicity: invalid partition");
  if (d < 1) throw std::invalid_argument("weyl_multiplicity: d must be >= 1");
  if (lam.rows() > d) return 0;
  std::vector<long long> padded(d, 0);
  for (int i = 0; i < lam.rows(); ++i) padded[i] = lam.parts[i];
  __int128 num = 1, den = 1;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      num *= padded[i] - padded[j] + j - i;
      den *= j - i;
    }
  return detail::to_int64_checked(num / den, "weyl multiplicity");
}

// Standard Young tableau stored as its row filling; equipped with the box
// lookup used by the representation matrices.
struct StandardTableau {
  Partition shape;
  std::vector<std::vector<int>> rows;  // rows[r][c] = entry in box (r, c)

  // (row, col) of the box holding k (1-based entry), 0-based coordinates.
  std::pair<int, int> position_of(int k) const {
    for (int r = 0; r < static_cast<int>(rows.size()); ++r)
      for (int c = 0; c < static_cast<int>(rows[r].size()); ++c)
        if (rows[r][c] == k) return {r, c};
    throw std::invalid_argument("entry not present in tableau");
  }

  // Content (col - row) of the box holding k.
  int content_of(int k) const {
    auto [r, c] = position_of(k);
    return c - r;
  }

  bool operator==(const StandardTableau& o) const { return rows == o.rows; }
};

// All standard tableaux of shape lambda in last-letter order.
inline std::vector<StandardTableau> enumerate_syt(const Partition& lam) {
  if (!lam.valid()) throw std::invalid_argument("enumerate_syt: invalid partition");
  // Direct recursive construction: a tableau of shape lambda is a corner box
  // holding n plus a tableau of the shrunken shape. Corners visited in
  // decreasing row order yields last-letter order.
  struct Rec {
    static std::vector<StandardTableau> build(const Partition& shape) {
      int n = shape.n();
      std::vector<StandardTableau> out;
      if (n == 1) {
        StandardTableau t;
        t.shape = shape;
        t.rows.assign(1, std::vector<int>{1});
        return {t};
      }
      for (int r = shape.rows() - 1; r >= 0; --r) {
        bool corner = (r + 1 == shape.rows()) || (shape.parts[r + 1] < shape.parts[r]);
        if (!corner) continue;
        std::vector<int> sp = shape.parts;
        sp[r] -= 1;
        if (sp[r] == 0) sp.erase(sp.begin() + r);
        Partition shrunk(sp);
        for (auto& sub : build(shrunk)) {
          StandardTableau t;
          t.shape = shape;
          t.rows = sub.rows;
          if (r == static_cast<int>(t.rows.size()))
            t.rows.emplace_back();
          t.rows[r].push_back(n);
          out.push_back(std::move(t));
        }
      }
      return out;
    }
  };
  return Rec::build(lam);
}

namespace detail {

// Beta-set of a partition: strictly decreasing first-column hook lengths
// lambda_i + (r - 1 - i), i = 0..r-1.
inline std::vector<int> beta_set(const Partition& lam) {
  int r = lam.rows();
  std::vector<int> b(r);
  for (int i = 0; i < r; ++i) b[i] = lam.parts[i] + (r - 1 - i);
  return b;
}

inline Partition partition_from_beta(std::vector<int> beta) {
  std::sort(beta.begin(), beta.end(), std::greater<int>());
  int r = static_cast<int>(beta.size());
  std::vector<int> parts;
  for (int i = 0; i < r; ++i) {
    int p = beta[i] - (r - 1 - i);
    if (p > 0) parts.push_back(p);
    // p == 0 rows are padding and simply dropped; p < 0 cannot occur for a
    // valid beta set.
  }
  return Partition(parts);
}

inline long long mn_character(const Partition& lam, std::vector<int> cycles,
                              std::map<std::pair<std::vector<int>, std::vector<int>>, long long>& memo);

inline long long mn_sum_over_strips(const Partition& lam, const std::vector<int>& cycles,
                                    std::map<std::pair<std::vector<int>, std::vector<int>>, long long>& memo) {
  // Remove one border strip of length cycles.front() via the beta-set rule:
  // b -> b - len for b in B with b - len >= 0 and b - len not in B; the sign
  // is (-1)^(number of beta elements strictly between b - len and b).
  int len = cycles.front();
  std::vector<int> rest(cycles.begin() + 1, cycles.end());
  std::vector<int> beta = beta_set(lam);
  std::set<int> bset(beta.begin(), beta.end());
  long long total = 0;
  for (int b : beta) {
    int target = b - len;
    if (target < 0 || bset.count(target)) continue;
    int height = 0;
    for (int other : beta)
      if (other > target && other < b) ++height;
    std::vector<int> nb;
    nb.reserve(beta.size());
    for (int other : beta) nb.push_back(other == b ? target : other);
    Partition mu = partition_from_beta(nb);
    long long sub;
    if (mu.parts.empty()) {
      sub = rest.empty() ? 1 : 0;  // rest cannot be nonempty here (sizes match)
    } else {
      sub = mn_character(mu, rest, memo);
    }
    total += (height % 2 == 0 ? sub : -sub);
  }
  return total;
}

inline long long mn_character(const Partition& lam, std::vector<int> cycles,
                              std::map<std::pair<std::vector<int>, std::vector<int>>, long long>& memo) {
  if (cycles.empty()) return 1;
  // All remaining cycles of length 1: the character of the identity on the
  // remaining shape, i.e. its hook dimension.
  if (cycles.front() == 1) return hook_dimension(lam);
  auto key = std::make_pair(lam.parts, cycles);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  long long v = mn_sum_over_strips(lam, cycles, memo);
  memo[key] = v;
  return v;
}

}  // namespace detail

// Murnaghan-Nakayama character chi_lambda(cycle_type). Both arguments must
// partition the same n.
inline long long character(const Partition& lam, const Partition& cycle_type) {
  if (!lam.valid() || !cycle_type.valid())
    throw std::invalid_argument("character: invalid partition input");
  if (lam.n() != cycle_type.n())
    throw std::invalid_argument("character: partition sizes differ");
  std::map<std::pair<std::vector<int>, std::vector<int>>, long long> memo;
  // Cycle lengths processed in decreasing order (any fixed order is valid).
  std::vector<int> cycles = cycle_type.parts;
  return detail::mn_character(lam, cycles, memo);
}

// Centralizer size z_mu = prod_k k^{m_k} m_k! for cycle type mu.
inline long long centralizer_size(const Partition& mu) {
  std::map<int, int> mult;
  for (int p : mu.parts) mult[p]++;
  __int128 z = 1;
  for (auto [k, m] : mult) {
    for (int i = 0; i < m; ++i) z *= k;
    z *= detail::checked_factorial(m);
  }
  return detail::to_int64_checked(z, "centralizer size");
}

}  // namespace schurand
