#pragma once
// Bi-coloured rooted trees for two-derivative Runge-Kutta order conditions.
//
// Every tree in this family has a second-derivative (g) vertex at the root;
// children are either first-derivative (f) leaves or themselves g-rooted
// subtrees.  Orders <= 6 need exactly 13 trees, which are hard-coded in a
// fixed canonical numbering instead of enumerated freely -- that keeps the
// isomorphism bookkeeping out of the picture entirely.
//
// Tree functions, with the root counting as two vertices:
//   rho(f) = 1,            rho([t1..tm]) = 2 + sum rho(tk)
//   gamma(f) = 1,          gamma([t1..tm]) = rho (rho - 1) prod gamma(tk)
//   alpha(f) = 1,          alpha([t1..tm]) = (rho - 2)! prod over distinct
//                            child shapes t_i with multiplicity n_i of
//                            (1 / n_i!) (alpha(t_i) / rho(t_i)!)^{n_i}
// alpha counts monotonic labellings, equivalently rho! / (sigma gamma) with
// sigma the symmetry group order.
//
// The elementary weight of a tree against a tableau is
//   Phi([t1..tm]) = sum_i b_i prod_k Phi_i(tk)
//   Phi_i(f) = xi_i c_i,   Phi_i([t1..tm]) = sum_j a_ij prod_k Phi_j(tk)
// and the order conditions read Phi(tau) = 1/gamma(tau) + O(h^{p+1-rho}).

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "tableau.hpp"
#include "util.hpp"

namespace eftddirk {

// One vertex: a first-derivative leaf, or a second-derivative vertex with a
// (possibly empty) multiset of child subtrees.
struct TreeNode {
  bool is_f = false;
  std::vector<TreeNode> children;
};

struct BiTree {
  int index = 0;  // 1-based position in the canonical listing
  int rho = 0;
  int alpha = 0;
  int gamma = 0;
  std::string label;
  TreeNode root;  // always a second-derivative vertex
};

namespace detail {

inline bool tree_equal(const TreeNode& a, const TreeNode& b) {
  if (a.is_f != b.is_f || a.children.size() != b.children.size()) return false;
  for (std::size_t k = 0; k < a.children.size(); ++k)
    if (!tree_equal(a.children[k], b.children[k])) return false;
  return true;
}

inline int tree_rho(const TreeNode& n) {
  if (n.is_f) return 1;
  int r = 2;
  for (const TreeNode& ch : n.children) r += tree_rho(ch);
  return r;
}

inline long tree_gamma(const TreeNode& n) {
  if (n.is_f) return 1;
  const long r = tree_rho(n);
  long g = r * (r - 1);
  for (const TreeNode& ch : n.children) g *= tree_gamma(ch);
  return g;
}

inline long factorial(int n) {
  long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

inline double tree_alpha(const TreeNode& n) {
  if (n.is_f) return 1.0;
  double a = double(factorial(tree_rho(n) - 2));
  std::vector<bool> counted(n.children.size(), false);
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (counted[i]) continue;
    int mult = 0;
    for (std::size_t j = i; j < n.children.size(); ++j)
      if (!counted[j] && tree_equal(n.children[i], n.children[j])) {
        counted[j] = true;
        ++mult;
      }
    const double per = tree_alpha(n.children[i]) / double(factorial(tree_rho(n.children[i])));
    a /= double(factorial(mult));
    for (int k = 0; k < mult; ++k) a *= per;
  }
  return a;
}

inline BiTree make_bitree(int index, std::string label, TreeNode root) {
  BiTree t;
  t.index = index;
  t.rho = tree_rho(root);
  t.gamma = int(tree_gamma(root));
  const double a = tree_alpha(root);
  t.alpha = int(std::lround(a));
  if (std::fabs(a - t.alpha) > 1e-9)
    throw std::logic_error("non-integer symmetry count for tree " + label);
  t.label = std::move(label);
  t.root = std::move(root);
  return t;
}

}  // namespace detail

// The 13 canonical trees of order <= 6, restricted to rho <= max_order.
// Counts by max_order: 2 -> 1, 3 -> 2, 4 -> 4, 5 -> 7, 6 -> 13.
inline std::vector<BiTree> enumerate_trees(int max_order) {
  if (max_order < 2 || max_order > 6)
    throw std::invalid_argument("enumerate_trees: max_order must be in [2, 6]");
  const TreeNode f{true, {}};
  const TreeNode g{false, {}};
  auto node = [](std::vector<TreeNode> ch) { return TreeNode{false, std::move(ch)}; };
  static const std::vector<BiTree> all = {
      detail::make_bitree(1, "g", g),
      detail::make_bitree(2, "[f]", node({f})),
      detail::make_bitree(3, "[g]", node({g})),
      detail::make_bitree(4, "[f,f]", node({f, f})),
      detail::make_bitree(5, "[[f]]", node({node({f})})),
      detail::make_bitree(6, "[f,g]", node({f, g})),
      detail::make_bitree(7, "[f,f,f]", node({f, f, f})),
      detail::make_bitree(8, "[[g]]", node({node({g})})),
      detail::make_bitree(9, "[[f,f]]", node({node({f, f})})),
      detail::make_bitree(10, "[f,[f]]", node({f, node({f})})),
      detail::make_bitree(11, "[g,g]", node({g, g})),
      detail::make_bitree(12, "[f,f,g]", node({f, f, g})),
      detail::make_bitree(13, "[f,f,f,f]", node({f, f, f, f})),
  };
  std::vector<BiTree> out;
  for (const BiTree& t : all)
    if (t.rho <= max_order) out.push_back(t);
  return out;
}

namespace detail {

inline double stage_weight(const TreeNode& n, const NumericTableau& t, int i) {
  if (n.is_f) return t.xi[i] * t.c[i];
  double sum = 0;
  for (int j = 0; j <= i; ++j) {
    double prod = t.a[i][j];
    for (const TreeNode& ch : n.children) prod *= stage_weight(ch, t, j);
    sum += prod;
  }
  return sum;
}

}  // namespace detail

inline double elementary_weight(const BiTree& tree, const NumericTableau& tab) {
  if (tree.root.is_f)
    throw std::invalid_argument("elementary_weight: tree must be rooted at a "
                                "second-derivative vertex");
  double sum = 0;
  for (int i = 0; i < tab.s; ++i) {
    double prod = tab.b[i];
    for (const TreeNode& ch : tree.root.children) prod *= detail::stage_weight(ch, tab, i);
    sum += prod;
  }
  return sum;
}

struct OrderResidualRow {
  int tree_no = 0;
  int rho = 0;
  int gamma = 0;
  double h = 0;
  double residual = 0;
  double slope = std::numeric_limits<double>::quiet_NaN();  // NaN: all points at round-off
};

// Residuals |Phi(tau) - 1/gamma(tau)| at v = omega h over a decreasing
// geometric grid of at least four step sizes, for every tree with
// rho <= design order.  Each row repeats the tree's fitted log-log slope;
// points below 1e-13 are treated as round-off and excluded from the fit.
// A slope of at least p + 1 - rho - 0.2 certifies the condition.
inline std::vector<OrderResidualRow> order_residuals(const SchemeSpec& sp, double omega,
                                                     const std::vector<double>& h_list) {
  if (!(omega > 0)) throw std::invalid_argument("order_residuals: omega must be positive");
  if (h_list.size() < 4)
    throw std::invalid_argument("order_residuals: need at least 4 step sizes");
  const double ratio = h_list[1] / h_list[0];
  if (!(ratio > 0) || !(ratio < 1))
    throw std::invalid_argument("order_residuals: step sizes must decrease");
  for (std::size_t k = 1; k + 1 < h_list.size(); ++k)
    if (std::fabs(h_list[k + 1] / h_list[k] - ratio) > 1e-9 * ratio)
      throw std::invalid_argument("order_residuals: step sizes must form a geometric sequence");

  std::vector<NumericTableau> tabs;
  tabs.reserve(h_list.size());
  for (double h : h_list) tabs.push_back(eval_tableau(sp, omega * h));

  std::vector<OrderResidualRow> rows;
  for (const BiTree& tree : enumerate_trees(sp.order)) {
    std::vector<double> res(h_list.size());
    for (std::size_t k = 0; k < h_list.size(); ++k)
      res[k] = std::fabs(elementary_weight(tree, tabs[k]) - 1.0 / tree.gamma);
    const SlopeFit fit = fit_loglog(h_list, res, 1e-13);
    for (std::size_t k = 0; k < h_list.size(); ++k)
      rows.push_back({tree.index, tree.rho, tree.gamma, h_list[k], res[k], fit.slope});
  }
  return rows;
}

}  // namespace eftddirk
