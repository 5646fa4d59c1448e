#include "talab/cayley.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "talab/rng.hpp"

namespace talab {

GroupTable::GroupTable(int order, std::vector<int> mul_flat, std::vector<std::string> names)
    : order_(order), mul_(std::move(mul_flat)), names_(std::move(names)) {
  if (order < 1 || order > 720) throw std::invalid_argument("GroupTable: order outside [1,720]");
  if (mul_.size() != static_cast<std::size_t>(order) * order)
    throw std::invalid_argument("GroupTable: table size mismatch");
  for (int v : mul_)
    if (v < 0 || v >= order) throw std::invalid_argument("GroupTable: entry out of range");
  if (names_.empty()) {
    names_.resize(order);
    for (int i = 0; i < order; ++i) names_[i] = std::to_string(i);
  }

  identity_ = -1;
  for (int e = 0; e < order; ++e) {
    bool ok = true;
    for (int a = 0; a < order && ok; ++a) ok = mul(e, a) == a && mul(a, e) == a;
    if (ok) {
      identity_ = e;
      break;
    }
  }
  if (identity_ < 0) throw std::invalid_argument("GroupTable: no identity element");

  inv_.assign(order, -1);
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b)
      if (mul(a, b) == identity_ && mul(b, a) == identity_) {
        inv_[a] = b;
        break;
      }
    if (inv_[a] < 0) throw std::invalid_argument("GroupTable: missing inverse");
  }

  if (order <= 64) {
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b)
        for (int c = 0; c < order; ++c)
          if (mul(mul(a, b), c) != mul(a, mul(b, c)))
            throw std::invalid_argument("GroupTable: associativity fails");
  } else {
    Rng rng(0xa550c1a7ull);
    for (int k = 0; k < 20000; ++k) {
      int a = static_cast<int>(rng.next_u64() % order);
      int b = static_cast<int>(rng.next_u64() % order);
      int c = static_cast<int>(rng.next_u64() % order);
      if (mul(mul(a, b), c) != mul(a, mul(b, c)))
        throw std::invalid_argument("GroupTable: associativity fails");
    }
  }
}

void validate_generators(const GroupTable& g, const GeneratorSet& s) {
  if (s.elements.empty()) throw std::invalid_argument("generators: empty set");
  std::set<int> set(s.elements.begin(), s.elements.end());
  if (set.size() != s.elements.size()) throw std::invalid_argument("generators: duplicate element");
  if (set.count(g.identity())) throw std::invalid_argument("generators: identity in S");
  for (int e : set)
    if (!set.count(g.inverse(e)))
      throw std::invalid_argument("generators: set is not symmetric (missing an inverse)");
  // Closure by breadth-first multiplication.
  std::vector<bool> reached(g.order(), false);
  std::queue<int> q;
  reached[g.identity()] = true;
  q.push(g.identity());
  int count = 1;
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int e : s.elements) {
      int y = g.mul(e, x);
      if (!reached[y]) {
        reached[y] = true;
        ++count;
        q.push(y);
      }
    }
  }
  if (count != g.order()) throw std::invalid_argument("generators: set does not generate the group");
}

bool conjugacy_closed(const GroupTable& g, const GeneratorSet& s) {
  std::set<int> set(s.elements.begin(), s.elements.end());
  for (int u : s.elements)
    for (int e : s.elements)
      if (!set.count(g.mul(g.mul(u, e), g.inverse(u)))) return false;
  return true;
}

CayleyChain build_cayley_chain(const GroupTable& g, const GeneratorSet& s) {
  validate_generators(g, s);
  int n = g.order();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  double w = 1.0 / static_cast<double>(s.elements.size());
  for (int x = 0; x < n; ++x)
    for (int e : s.elements) k(x, g.mul(e, x)) += w;
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(n, 1.0 / n);
  std::vector<std::string> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = g.name(i);
  return {g, s, build_chain(k, mu, std::move(labels))};
}

Eigen::VectorXd edge_derivative(const CayleyChain& c, int s, const Eigen::VectorXd& f) {
  if (std::find(c.gens.elements.begin(), c.gens.elements.end(), s) == c.gens.elements.end())
    throw std::invalid_argument("edge_derivative: s is not a generator");
  if (f.size() != c.group.order()) throw std::invalid_argument("edge_derivative: size mismatch");
  Eigen::VectorXd d(f.size());
  for (int x = 0; x < c.group.order(); ++x) d[x] = f[c.group.mul(s, x)] - f[x];
  return d;
}

double influence_s(const CayleyChain& c, const Eigen::VectorXd& a, int s) {
  if (std::find(c.gens.elements.begin(), c.gens.elements.end(), s) == c.gens.elements.end())
    throw std::invalid_argument("influence_s: s is not a generator");
  double total = 0.0;
  for (int x = 0; x < c.group.order(); ++x) {
    double vx = a[x];
    if (vx != 0.0 && vx != 1.0) throw std::invalid_argument("influence_s: not an indicator");
    if (vx == 1.0 && a[c.group.mul(s, x)] == 0.0) total += 1.0;
  }
  return total / c.group.order();
}

DirichletDecomposition cayley_direction_family(const CayleyChain& c) {
  DirichletDecomposition d;
  double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(c.gens.elements.size()));
  for (int s : c.gens.elements) {
    const GroupTable& g = c.group;
    d.directions.push_back([&g, s, scale](const Eigen::VectorXd& f) {
      Eigen::VectorXd out(f.size());
      for (int x = 0; x < f.size(); ++x) out[x] = scale * std::abs(f[g.mul(s, x)] - f[x]);
      return out;
    });
  }
  d.kappa = 0.0;
  return d;
}

namespace {

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::string cycle_name(const std::vector<int>& p) {
  std::string s;
  std::vector<bool> used(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (used[i] || p[i] == static_cast<int>(i)) continue;
    s += "(";
    std::size_t j = i;
    while (!used[j]) {
      used[j] = true;
      s += std::to_string(j + 1);
      j = p[j];
      if (!used[j]) s += " ";
    }
    s += ")";
  }
  return s.empty() ? "e" : s;
}

}  // namespace

PermutationGroup symmetric_group(int n) {
  if (n < 2 || n > 6) throw std::invalid_argument("symmetric_group: n outside [2,6]");
  auto perms = all_permutations(n);
  int order = static_cast<int>(perms.size());
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < order; ++i) index[perms[i]] = i;

  std::vector<int> mul(static_cast<std::size_t>(order) * order);
  std::vector<int> comp(n);
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b) {
      for (int k = 0; k < n; ++k) comp[k] = perms[a][perms[b][k]];
      mul[static_cast<std::size_t>(a) * order + b] = index.at(comp);
    }

  std::vector<std::string> names(order);
  for (int i = 0; i < order; ++i) names[i] = cycle_name(perms[i]);

  GeneratorSet s;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<int> t(n);
      for (int k = 0; k < n; ++k) t[k] = k;
      std::swap(t[i], t[j]);
      s.elements.push_back(index.at(t));
    }
  return {GroupTable(order, std::move(mul), std::move(names)), std::move(s)};
}

PermutationGroup elementary_abelian(int n) {
  if (n < 1 || n > 9) throw std::invalid_argument("elementary_abelian: n outside [1,9]");
  int order = 1 << n;
  std::vector<int> mul(static_cast<std::size_t>(order) * order);
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b) mul[static_cast<std::size_t>(a) * order + b] = a ^ b;
  GeneratorSet s;
  for (int i = 0; i < n; ++i) s.elements.push_back(1 << i);
  return {GroupTable(order, std::move(mul)), std::move(s)};
}

GroupTable read_group(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("group read: missing header");
  int n = 0;
  if (std::sscanf(line.c_str(), "order=%d", &n) != 1 || n < 1)
    throw std::runtime_error("group read: malformed header: " + line);
  std::vector<int> mul(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    if (!std::getline(is, line)) throw std::runtime_error("group read: truncated table");
    std::istringstream ls(line);
    for (int b = 0; b < n; ++b)
      if (!(ls >> mul[static_cast<std::size_t>(a) * n + b]))
        throw std::runtime_error("group read: bad row " + std::to_string(a));
  }
  return GroupTable(n, std::move(mul));
}

}  // namespace talab
