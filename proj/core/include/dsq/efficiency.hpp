#ifndef DSQ_EFFICIENCY_HPP
#define DSQ_EFFICIENCY_HPP

namespace dsq {

enum class Iso { rb85, rb87 };

// Per-species efficiency chain: signal detection eps_s, spin-wave retrieval
// eps_r, retrieved-idler detection eps_i.  The coincidence weight per species
// is the product mu = eps_s * eps_r * eps_i.
struct EfficiencyBudget {
  double eps_s_85 = 1.0;
  double eps_s_87 = 1.0;
  double eps_r_85 = 1.0;
  double eps_r_87 = 1.0;
  double eps_i_85 = 1.0;
  double eps_i_87 = 1.0;

  double eps_s(Iso iso) const { return iso == Iso::rb85 ? eps_s_85 : eps_s_87; }
  double eps_r(Iso iso) const { return iso == Iso::rb85 ? eps_r_85 : eps_r_87; }
  double eps_i(Iso iso) const { return iso == Iso::rb85 ? eps_i_85 : eps_i_87; }
  double mu(Iso iso) const { return eps_s(iso) * eps_r(iso) * eps_i(iso); }
  double mu_85() const { return mu(Iso::rb85); }
  double mu_87() const { return mu(Iso::rb87); }

  void validate() const;
};

}  // namespace dsq

#endif
