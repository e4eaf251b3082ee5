#ifndef DSQ_FOCK_HPP
#define DSQ_FOCK_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "dsq/efficiency.hpp"
#include "dsq/ensemble.hpp"

namespace dsq {

// Mode order inside occupation tuples: (n_a85, n_a87, n_s85, n_s87), the two
// signal photon modes then the two collective spin modes.
enum class Mode : int { signal_85 = 0, signal_87 = 1, spin_85 = 2, spin_87 = 3 };

inline Mode signal_mode(Iso iso) { return iso == Iso::rb85 ? Mode::signal_85 : Mode::signal_87; }
inline Mode spin_mode(Iso iso) { return iso == Iso::rb85 ? Mode::spin_85 : Mode::spin_87; }

using Occupation = std::array<int, 4>;

// Dense pure state on the four-mode Fock space truncated at n_max quanta per
// mode.
class TruncatedFockState {
 public:
  explicit TruncatedFockState(int n_max);  // vacuum

  int n_max() const { return n_max_; }
  std::size_t dim() const { return amp_.size(); }

  std::complex<double>& at(const Occupation& occ);
  const std::complex<double>& at(const Occupation& occ) const;
  Occupation unpack(std::size_t index) const;
  const std::vector<std::complex<double>>& data() const { return amp_; }

  double norm2() const;
  double truncation_leakage() const { return leakage_; }
  void set_truncation_leakage(double v) { leakage_ = v; }

  // One line per nonzero amplitude: "n_a85 n_a87 n_s85 n_s87 re im".
  std::string to_text() const;

 private:
  int n_max_;
  std::vector<std::complex<double>> amp_;
  double leakage_ = 0;
};

// Default truncation depth for a given total coupling strength.
int default_n_max(double chi_total);

// Output of the write-pulse unitary on vacuum: the product of two two-mode
// squeezers with parameters r85 = chi cos(eta), r87 = chi sin(eta) acting on
// (a85, s85) and (a87, s87).  Amplitudes are
//   [tanh^n(r85)/cosh(r85)] [tanh^n'(r87)/cosh(r87)]
// on occupation (n, n', n, n').  Throws NumericalError when the truncated
// weight 1 - sum |amp|^2 exceeds leakage_bound.
TruncatedFockState build_entangled_state(const InteractionParams& params,
                                         int n_max,
                                         double leakage_bound = 1e-10);

// Sparse density operator keyed by (ket, bra) occupation pairs.  Loss
// channels preserve the per-mode occupation difference between ket and bra,
// so the support stays near the diagonal band of the squeezed state.
class MixedState {
 public:
  static MixedState from_pure(const TruncatedFockState& psi);

  int n_max() const { return n_max_; }
  std::size_t support_size() const { return rho_.size(); }
  double trace() const;

  // Beam-splitter loss of transmissivity eps on one mode (Kraus form
  // K_j |n> = sqrt(C(n,j) eps^(n-j) (1-eps)^j) |n-j>).
  MixedState apply_loss(Mode mode, double eps) const;

  // Normally ordered fourth moment <adag_p sdag_q s_r a_t> with species
  // selectors: p, t pick signal modes and q, r pick spin modes.
  std::complex<double> moment(Iso p, Iso q, Iso r, Iso t) const;

  double mean_occupation(Mode mode) const;
  std::complex<double> entry(const Occupation& ket, const Occupation& bra) const;

 private:
  explicit MixedState(int n_max) : n_max_(n_max) {}
  static std::uint32_t pack(const Occupation& ket, const Occupation& bra);

  int n_max_;
  std::unordered_map<std::uint32_t, std::complex<double>> rho_;
};

MixedState apply_loss(const TruncatedFockState& psi, Mode mode, double eps);

}  // namespace dsq

#endif
