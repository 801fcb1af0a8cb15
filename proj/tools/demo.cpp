// Library walk-through: generate a small CD2D sequence, map the last Jacobian onto the first with a
// few patterns, and compare against the dense exact map.
#include <iostream>

#include "samap/samap.hpp"

int main() {
  samap::Cd2dConfig cfg;
  cfg.m = 20;
  const auto run = samap::generate_cd2d_sequence(cfg);
  const auto& seq = run.sequence;
  std::cout << seq.size() << " Jacobians, n = " << seq.dimension() << ", nnz = " << seq[0].nnz() << '\n';

  const auto& a0 = seq[0];
  const auto& ak = seq[seq.size() - 1];
  for (const char* spec : {"target", "col:0.8@level1", "lfil:5@level2"}) {
    const auto recipe = samap::parse_recipe(spec);
    const auto res = samap::compute_sam(ak, a0, recipe.build(ak, a0));
    std::cout << spec << ": pattern " << res.nnz_pattern << ", relative residual " << res.relative_residual << '\n';
  }

  const auto nhat = samap::exact_map(ak, a0);
  for (double tol : {1e-2, 1e-4, 1e-8})
    std::cout << "exact map entries above " << tol << ": " << samap::sparsify_dense_map(nhat, tol).nnz() << '\n';
}
