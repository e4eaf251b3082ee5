#include "dsq/fock.hpp"

#include <cmath>
#include <sstream>

#include "dsq/errors.hpp"

namespace dsq {

namespace {

constexpr int kMaxSupported = 15;  // occupations are packed into 4 bits

void check_n_max(int n_max) {
  if (n_max < 1 || n_max > kMaxSupported) {
    throw ConfigError("n_max must lie in [1, " + std::to_string(kMaxSupported) + "]");
  }
}

double binomial(int n, int k) {
  double b = 1;
  for (int i = 1; i <= k; ++i) b *= double(n - k + i) / i;
  return b;
}

}  // namespace

TruncatedFockState::TruncatedFockState(int n_max) : n_max_(n_max) {
  check_n_max(n_max);
  const std::size_t d = n_max + 1;
  amp_.assign(d * d * d * d, {0.0, 0.0});
  amp_[0] = {1.0, 0.0};
}

std::complex<double>& TruncatedFockState::at(const Occupation& occ) {
  const std::size_t d = n_max_ + 1;
  for (int n : occ) {
    if (n < 0 || n > n_max_) throw ConfigError("occupation outside truncated space");
  }
  return amp_[((occ[0] * d + occ[1]) * d + occ[2]) * d + occ[3]];
}

const std::complex<double>& TruncatedFockState::at(const Occupation& occ) const {
  return const_cast<TruncatedFockState*>(this)->at(occ);
}

Occupation TruncatedFockState::unpack(std::size_t index) const {
  const std::size_t d = n_max_ + 1;
  Occupation occ;
  occ[3] = int(index % d);
  index /= d;
  occ[2] = int(index % d);
  index /= d;
  occ[1] = int(index % d);
  occ[0] = int(index / d);
  return occ;
}

double TruncatedFockState::norm2() const {
  double s = 0;
  for (const auto& a : amp_) s += std::norm(a);
  return s;
}

std::string TruncatedFockState::to_text() const {
  std::ostringstream out;
  out.precision(17);
  out << "# n_a85 n_a87 n_s85 n_s87 re im\n";
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    if (std::norm(amp_[i]) == 0.0) continue;
    const Occupation occ = unpack(i);
    out << occ[0] << ' ' << occ[1] << ' ' << occ[2] << ' ' << occ[3] << ' '
        << amp_[i].real() << ' ' << amp_[i].imag() << '\n';
  }
  return out.str();
}

int default_n_max(double chi_total) { return chi_total > 0.1 ? 6 : 4; }

TruncatedFockState build_entangled_state(const InteractionParams& params,
                                         int n_max, double leakage_bound) {
  params.validate();
  check_n_max(n_max);
  const double r85 = params.chi_85;
  const double r87 = params.chi_87;
  const double t85 = std::tanh(r85);
  const double t87 = std::tanh(r87);
  const double norm = 1.0 / (std::cosh(r85) * std::cosh(r87));

  TruncatedFockState psi(n_max);
  psi.at({0, 0, 0, 0}) = 0.0;
  double kept = 0;
  for (int n = 0; n <= n_max; ++n) {
    const double w85 = norm * std::pow(t85, n);
    for (int np = 0; np <= n_max; ++np) {
      const double a = w85 * std::pow(t87, np);
      psi.at({n, np, n, np}) = a;
      kept += a * a;
    }
  }
  const double leakage = 1.0 - kept;
  if (leakage > leakage_bound) {
    throw NumericalError("truncation leakage " + std::to_string(leakage) +
                         " exceeds bound " + std::to_string(leakage_bound) +
                         " at n_max = " + std::to_string(n_max));
  }
  psi.set_truncation_leakage(leakage);
  return psi;
}

std::uint32_t MixedState::pack(const Occupation& ket, const Occupation& bra) {
  std::uint32_t key = 0;
  for (int i = 0; i < 4; ++i) key = (key << 4) | std::uint32_t(ket[i]);
  for (int i = 0; i < 4; ++i) key = (key << 4) | std::uint32_t(bra[i]);
  return key;
}

MixedState MixedState::from_pure(const TruncatedFockState& psi) {
  MixedState rho(psi.n_max());
  std::vector<std::pair<Occupation, std::complex<double>>> nz;
  for (std::size_t i = 0; i < psi.data().size(); ++i) {
    if (std::norm(psi.data()[i]) > 0.0) nz.emplace_back(psi.unpack(i), psi.data()[i]);
  }
  for (const auto& [ket, a] : nz) {
    for (const auto& [bra, b] : nz) {
      rho.rho_[pack(ket, bra)] = a * std::conj(b);
    }
  }
  return rho;
}

double MixedState::trace() const {
  double t = 0;
  for (const auto& [key, v] : rho_) {
    if ((key >> 16) == (key & 0xffffu)) t += v.real();
  }
  return t;
}

MixedState MixedState::apply_loss(Mode mode, double eps) const {
  if (!(eps >= 0.0 && eps <= 1.0)) throw ConfigError("loss transmissivity must lie in [0, 1]");
  const int idx = static_cast<int>(mode);
  MixedState out(n_max_);
  for (const auto& [key, v] : rho_) {
    Occupation ket, bra;
    std::uint32_t k = key;
    for (int i = 3; i >= 0; --i) {
      bra[i] = int(k & 0xf);
      k >>= 4;
    }
    for (int i = 3; i >= 0; --i) {
      ket[i] = int(k & 0xf);
      k >>= 4;
    }
    const int n = ket[idx];
    const int nb = bra[idx];
    const int j_max = std::min(n, nb);
    for (int j = 0; j <= j_max; ++j) {
      // sqrt(C(n,j) eps^(n-j) (1-eps)^j) on each side of the dyad.
      const double amp_k = std::sqrt(binomial(n, j) * std::pow(eps, n - j) *
                                     std::pow(1.0 - eps, j));
      const double amp_b = std::sqrt(binomial(nb, j) * std::pow(eps, nb - j) *
                                     std::pow(1.0 - eps, j));
      const double w = amp_k * amp_b;
      if (w == 0.0) continue;
      Occupation ket2 = ket, bra2 = bra;
      ket2[idx] = n - j;
      bra2[idx] = nb - j;
      out.rho_[pack(ket2, bra2)] += v * w;
    }
  }
  return out;
}

std::complex<double> MixedState::moment(Iso p, Iso q, Iso r, Iso t) const {
  const int mp = static_cast<int>(signal_mode(p));
  const int mq = static_cast<int>(spin_mode(q));
  const int mr = static_cast<int>(spin_mode(r));
  const int mt = static_cast<int>(signal_mode(t));
  std::complex<double> acc = 0;
  for (const auto& [key, v] : rho_) {
    Occupation ket, bra;
    std::uint32_t k = key;
    for (int i = 3; i >= 0; --i) {
      bra[i] = int(k & 0xf);
      k >>= 4;
    }
    for (int i = 3; i >= 0; --i) {
      ket[i] = int(k & 0xf);
      k >>= 4;
    }
    // <bra| adag_p sdag_q s_r a_t |ket>
    if (ket[mt] < 1) continue;
    double amp = std::sqrt(double(ket[mt]));
    Occupation cur = ket;
    cur[mt] -= 1;
    if (cur[mr] < 1) continue;
    amp *= std::sqrt(double(cur[mr]));
    cur[mr] -= 1;
    if (cur[mq] + 1 > n_max_) continue;
    cur[mq] += 1;
    amp *= std::sqrt(double(cur[mq]));
    if (cur[mp] + 1 > n_max_) continue;
    cur[mp] += 1;
    amp *= std::sqrt(double(cur[mp]));
    if (cur != bra) continue;
    acc += v * amp;
  }
  return acc;
}

double MixedState::mean_occupation(Mode mode) const {
  const int idx = static_cast<int>(mode);
  double acc = 0;
  for (const auto& [key, v] : rho_) {
    if ((key >> 16) != (key & 0xffffu)) continue;
    const int n = int((key >> (4 * (3 - idx))) & 0xf);
    acc += v.real() * n;
  }
  return acc;
}

std::complex<double> MixedState::entry(const Occupation& ket, const Occupation& bra) const {
  const auto it = rho_.find(pack(ket, bra));
  return it == rho_.end() ? std::complex<double>(0, 0) : it->second;
}

MixedState apply_loss(const TruncatedFockState& psi, Mode mode, double eps) {
  return MixedState::from_pure(psi).apply_loss(mode, eps);
}

}  // namespace dsq
