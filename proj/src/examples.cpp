#include "wardrop/examples.hpp"

#include <cmath>
#include <stdexcept>

namespace wardrop {

Instance gen_pigou(const PigouSpec& spec) {
    if (spec.p < 1) throw std::invalid_argument("pigou requires p >= 1");
    if (!(spec.demand > 0.0)) throw std::invalid_argument("pigou requires demand > 0");
    std::vector<Edge> edges;
    edges.push_back({0, 1, PolynomialLatency::monomial(spec.p)});
    edges.push_back({0, 1, PolynomialLatency::constant(1.0)});
    return Instance(Network(2, std::move(edges)), {{0, 1, spec.demand}});
}

Instance gen_two_commodity(const TwoCommoditySpec& spec) {
    if (!(spec.k >= 1.0)) throw std::invalid_argument("two-commodity requires k >= 1");
    const double k = spec.k;
    std::vector<Edge> edges;
    edges.push_back({0, 1, PolynomialLatency::monomial(1)});               // s -> t1: x
    edges.push_back({1, 2, PolynomialLatency::constant(k * k - 1.0)});     // t1 -> t2
    edges.push_back({0, 2, PolynomialLatency::monomial(1, k)});            // s -> t2: k*x
    return Instance(Network(3, std::move(edges)), {{0, 1, 1.0}, {0, 2, k}});
}

double pigou_poa_closed_form(int p, double epsilon) {
    if (p < 1) throw std::invalid_argument("p >= 1 required");
    if (!(epsilon >= 0.0)) throw std::domain_error("epsilon >= 0 required");
    const double pd = static_cast<double>(p);
    const double interior = (pd / (1.0 + pd)) * std::pow(1.0 / (1.0 + pd), 1.0 / pd);
    return (1.0 + epsilon) / (1.0 + epsilon - interior);
}

TwoCommodityEquilibrium two_commodity_ue_closed_form(double k, double epsilon) {
    if (!(k >= 1.0)) throw std::invalid_argument("k >= 1 required");
    if (!(epsilon >= 0.0)) throw std::domain_error("epsilon >= 0 required");
    TwoCommodityEquilibrium eq;
    eq.diversion = epsilon * (k - 1.0);
    eq.mu1 = 1.0 + k * epsilon;
    eq.mu2 = k * k + k * epsilon;
    eq.total_cost = (1.0 + epsilon) * (1.0 + k * k * k + epsilon * k * (1.0 + k));
    return eq;
}

}  // namespace wardrop
