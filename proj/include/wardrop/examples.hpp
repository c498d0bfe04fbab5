#ifndef WARDROP_EXAMPLES_HPP
#define WARDROP_EXAMPLES_HPP

#include "wardrop/model.hpp"

namespace wardrop {

/// Two parallel edges s->t: one with latency x^p, one constant 1, and a single
/// commodity routing `demand` from s to t.
struct PigouSpec {
    int p = 1;
    double demand = 1.0;
};

/// Three nodes s, t1, t2; edges s->t1 (latency x), t1->t2 (constant k^2-1),
/// s->t2 (latency k*x); commodities s->t1 with demand 1 and s->t2 with demand k.
struct TwoCommoditySpec {
    double k = 1.0;
};

Instance gen_pigou(const PigouSpec& spec);
Instance gen_two_commodity(const TwoCommoditySpec& spec);

/// Price of anarchy of the Pigou instance with base demand 1 scaled by (1+eps):
/// (1+eps) / (1+eps - p/(1+p) * (1/(1+p))^(1/p)). At eps=0 this equals
/// poa_upper_cap(p) and it decreases monotonically in eps.
double pigou_poa_closed_form(int p, double epsilon);

struct TwoCommodityEquilibrium {
    double mu1 = 0.0;        // min path latency of the demand-1 commodity
    double mu2 = 0.0;        // min path latency of the demand-k commodity
    double diversion = 0.0;  // flow of commodity 2 routed via t1
    double total_cost = 0.0;
};

/// Equilibrium of gen_two_commodity(k) with demands scaled by (1+eps):
/// diversion eps*(k-1), mu = (1+k*eps, k^2+k*eps),
/// C = (1+eps) * (1 + k^3 + eps*k*(1+k)).
TwoCommodityEquilibrium two_commodity_ue_closed_form(double k, double epsilon);

}  // namespace wardrop

#endif
