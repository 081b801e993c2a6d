#pragma once

// The maps rho, omega, iota and their composites zeta = rho o omega and
// psi = omega o iota o omega, as generator-substitution homomorphisms.
//
//   rho(t_ij(u))  = t_{s+1-i, s+1-j}(-u)      gl(m|n) -> gl(n|m), s = m + n
//   omega(T(u))   = T(-u)^{-1}                gl(m|n) -> gl(m|n)
//   iota(t_ij^{(r)}) = t_{i+k, j+k}^{(r)}      gl(m|n) -> gl(m+k|n)

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>

#include "dy/algebra.hpp"
#include "dy/report.hpp"
#include "dy/rtt.hpp"

namespace dy {

enum class MorphismKind { rho, omega, iota, zeta, psi };

const char* to_string(MorphismKind k);

class Morphism {
 public:
  using Producer = std::function<Element(Generator)>;

  Morphism(MorphismKind kind, ContextPtr source, ContextPtr target, int shift, int max_level,
           Producer producer);

  MorphismKind kind() const { return kind_; }
  const ContextPtr& source() const { return source_; }
  const ContextPtr& target() const { return target_; }
  int shift() const { return shift_; }
  int max_level() const { return max_level_; }

  // Normalized image in the target, computed on first use.  Throws CapError
  // past max_level and DomainError for a generator outside the source.
  Element image(Generator g) const;

 private:
  MorphismKind kind_;
  ContextPtr source_, target_;
  int shift_, max_level_;
  Producer producer_;
  mutable std::mutex mu_;
  mutable std::map<std::uint32_t, Element> images_;
};

// Owns one context and rule table per (m, n) at fixed (N, H, cap), and
// caches the morphisms built between them.  Thread-safe.
class Workspace {
 public:
  Workspace(int N, int H, int cap);

  int series_order() const { return N_; }
  int h_order() const { return H_; }
  int cap() const { return cap_; }

  ContextPtr context(int m, int n);
  RuleTable& table(int m, int n);
  RuleTable& table(const ContextPtr& ctx) { return table(ctx->m, ctx->n); }

  // k is used by iota (k >= 1) and psi (k >= 0, k = 0 is the identity).
  const Morphism& morphism(MorphismKind kind, int m, int n, int k = 0);
  const Morphism& rho(int m, int n) { return morphism(MorphismKind::rho, m, n); }
  const Morphism& omega(int m, int n) { return morphism(MorphismKind::omega, m, n); }
  const Morphism& iota(int m, int n, int k) { return morphism(MorphismKind::iota, m, n, k); }
  const Morphism& zeta(int m, int n) { return morphism(MorphismKind::zeta, m, n); }
  const Morphism& psi(int m, int n, int k) { return morphism(MorphismKind::psi, m, n, k); }

  // Rule tables are preloaded from dir/rules-m<m>-n<n>.txt when an algebra is
  // first used (StaleCacheError on a header mismatch) and written back by
  // save_cache().  Attach before any table is created.
  void attach_cache(std::filesystem::path dir);
  std::filesystem::path cache_file(int m, int n) const;
  void save_cache();

 private:
  struct Slot {
    ContextPtr ctx;
    std::unique_ptr<RuleTable> table;
  };
  Slot& slot(int m, int n);
  std::unique_ptr<Morphism> build(MorphismKind kind, int m, int n, int k);

  int N_, H_, cap_;
  std::filesystem::path cache_dir_;
  std::recursive_mutex mu_;
  std::map<std::pair<int, int>, Slot> slots_;
  std::map<std::tuple<int, int, int, int>, std::unique_ptr<Morphism>> morphisms_;
};

// Substitutes images generator by generator and normalizes in the target.
Element apply(const Morphism& phi, const Element& a, RuleTable& target);

// Checks is_zero(apply(phi, x y - rule(x, y))) on random straightening pairs.
ReportFragment sample_relation_preservation(const Morphism& phi, RuleTable& source, RuleTable& target,
                                            std::uint64_t seed, int trials);

// zeta(f_i) = -e_{s-i}, zeta(e_i) = -f_{s-i}, zeta(d_j) = d_{s-j+1}^{-1}, both signs.
ReportFragment verify_zeta_images(Workspace& ws, int m, int n, int jobs = 1);

// psi(d_j) = d_{k+j}, psi(e_ij) = e_{k+i,k+j}, psi(f_ji) = f_{k+j,k+i}, and
// psi(t_pq(u)) as the quasideterminant bordered by the leading k x k corner.
ReportFragment verify_psi_images(Workspace& ws, int m, int n, int k, int jobs = 1);

}  // namespace dy
