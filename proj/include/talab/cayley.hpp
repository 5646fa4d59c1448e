#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

#include "talab/chain.hpp"

namespace talab {

/// A finite group given by its full composition table (order <= 720).
/// mul(a,b) is the index of a*b; associativity is checked exhaustively up
/// to order 64 and on sampled triples above.
class GroupTable {
 public:
  GroupTable(int order, std::vector<int> mul_flat, std::vector<std::string> names = {});

  int order() const { return order_; }
  int mul(int a, int b) const { return mul_[static_cast<std::size_t>(a) * order_ + b]; }
  int inverse(int a) const { return inv_[a]; }
  int identity() const { return identity_; }
  const std::string& name(int a) const { return names_[a]; }

 private:
  int order_;
  std::vector<int> mul_;
  std::vector<int> inv_;
  std::vector<std::string> names_;
  int identity_;
};

struct GeneratorSet {
  std::vector<int> elements;
};

// Throws unless S is nonempty, symmetric (closed under inverse), omits the
// identity, and generates the whole group.
void validate_generators(const GroupTable& g, const GeneratorSet& s);

bool conjugacy_closed(const GroupTable& g, const GeneratorSet& s);

struct CayleyChain {
  GroupTable group;
  GeneratorSet gens;
  FiniteChain chain;  // K(x,y) = |S|^{-1} 1_S(y x^{-1}), uniform measure
};

CayleyChain build_cayley_chain(const GroupTable& g, const GeneratorSet& s);

// D_s f(x) = f(sx) - f(x); s must belong to the generator set.
Eigen::VectorXd edge_derivative(const CayleyChain& c, int s, const Eigen::VectorXd& f);

// I_s(A) = mu({x in A : sx not in A}) for an indicator vector over the group.
double influence_s(const CayleyChain& c, const Eigen::VectorXd& indicator_a, int s);

// The direction family {(2|S|)^{-1/2} |D_s f|} with kappa = 0, valid for
// conjugacy-closed S.
DirichletDecomposition cayley_direction_family(const CayleyChain& c);

struct PermutationGroup {
  GroupTable table;
  GeneratorSet transpositions;
};

// S_n with the set of all transpositions, 2 <= n <= 6.
PermutationGroup symmetric_group(int n);

// Z_2^N with the coordinate flips as generators.
PermutationGroup elementary_abelian(int n);

// Text import: "order=<n>" then n rows of n indices.
GroupTable read_group(std::istream& is);

}  // namespace talab
