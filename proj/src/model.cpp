#include "wardrop/model.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

#include "wardrop/errors.hpp"

namespace wardrop {

PolynomialLatency::PolynomialLatency() : coeffs_{0.0} {}

PolynomialLatency::PolynomialLatency(std::vector<double> coefficients)
    : coeffs_(std::move(coefficients)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    for (double c : coeffs_) {
        if (!(c >= 0.0))
            throw std::invalid_argument("latency coefficients must be nonnegative");
    }
    for (size_t m = 0; m < coeffs_.size(); ++m) {
        if (coeffs_[m] != 0.0) degree_ = static_cast<int>(m);
    }
}

PolynomialLatency PolynomialLatency::constant(double value) {
    return PolynomialLatency(std::vector<double>{value});
}

PolynomialLatency PolynomialLatency::monomial(int power, double coefficient) {
    if (power < 0) throw std::invalid_argument("monomial power must be nonnegative");
    std::vector<double> c(static_cast<size_t>(power) + 1, 0.0);
    c.back() = coefficient;
    return PolynomialLatency(std::move(c));
}

namespace {
void require_nonnegative(double x) {
    if (!(x >= 0.0)) throw std::domain_error("latency evaluated at negative flow");
}
}  // namespace

double PolynomialLatency::value(double x) const {
    require_nonnegative(x);
    double acc = 0.0;
    for (size_t m = coeffs_.size(); m-- > 0;) acc = acc * x + coeffs_[m];
    return acc;
}

double PolynomialLatency::marginal(double x) const {
    require_nonnegative(x);
    // sum_m (m+1) b_m x^m, Horner on the shifted coefficients.
    double acc = 0.0;
    for (size_t m = coeffs_.size(); m-- > 0;)
        acc = acc * x + static_cast<double>(m + 1) * coeffs_[m];
    return acc;
}

double PolynomialLatency::integral(double x) const {
    require_nonnegative(x);
    double acc = 0.0;
    for (size_t m = coeffs_.size(); m-- > 0;)
        acc = acc * x + coeffs_[m] / static_cast<double>(m + 1);
    return acc * x;
}

double PolynomialLatency::derivative(double x) const {
    require_nonnegative(x);
    double acc = 0.0;
    for (size_t m = coeffs_.size(); m-- > 1;)
        acc = acc * x + static_cast<double>(m) * coeffs_[m];
    return acc;
}

bool PolynomialLatency::is_constant(double tol) const {
    for (size_t m = 1; m < coeffs_.size(); ++m)
        if (coeffs_[m] >= tol) return false;
    return true;
}

PolynomialLatency PolynomialLatency::marginal_transform() const {
    std::vector<double> c(coeffs_.size());
    for (size_t m = 0; m < coeffs_.size(); ++m)
        c[m] = static_cast<double>(m + 1) * coeffs_[m];
    return PolynomialLatency(std::move(c));
}

Network::Network(int node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
    if (node_count_ < 0) throw std::invalid_argument("negative node count");
    for (const Edge& e : edges_) {
        if (e.tail < 0 || e.tail >= node_count_ || e.head < 0 || e.head >= node_count_)
            throw std::invalid_argument("edge endpoint outside [0, node_count)");
        degree_ = std::max(degree_, e.latency.degree());
    }
    adj_offsets_.assign(static_cast<size_t>(node_count_) + 1, 0);
    for (const Edge& e : edges_) ++adj_offsets_[static_cast<size_t>(e.tail) + 1];
    for (int v = 0; v < node_count_; ++v)
        adj_offsets_[static_cast<size_t>(v) + 1] += adj_offsets_[static_cast<size_t>(v)];
    adj_edges_.resize(edges_.size());
    std::vector<int> cursor(adj_offsets_.begin(), adj_offsets_.end() - 1);
    for (int e = 0; e < edge_count(); ++e)
        adj_edges_[static_cast<size_t>(cursor[static_cast<size_t>(edges_[static_cast<size_t>(e)].tail)]++)] = e;
}

std::span<const int> Network::outgoing(int node) const {
    const size_t lo = static_cast<size_t>(adj_offsets_[static_cast<size_t>(node)]);
    const size_t hi = static_cast<size_t>(adj_offsets_[static_cast<size_t>(node) + 1]);
    return {adj_edges_.data() + lo, hi - lo};
}

namespace {

// Nodes reachable from `origin` ignoring costs.
std::vector<char> reachable_from(const Network& net, int origin) {
    std::vector<char> seen(static_cast<size_t>(net.node_count()), 0);
    std::queue<int> frontier;
    seen[static_cast<size_t>(origin)] = 1;
    frontier.push(origin);
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        for (int e : net.outgoing(u)) {
            const int v = net.edge(e).head;
            if (!seen[static_cast<size_t>(v)]) {
                seen[static_cast<size_t>(v)] = 1;
                frontier.push(v);
            }
        }
    }
    return seen;
}

}  // namespace

Instance::Instance(Network network, std::vector<Commodity> commodities)
    : network_(std::move(network)), commodities_(std::move(commodities)) {
    const int n = network_.node_count();
    for (size_t i = 0; i < commodities_.size(); ++i) {
        const Commodity& c = commodities_[i];
        if (c.origin < 0 || c.origin >= n || c.destination < 0 || c.destination >= n)
            throw std::invalid_argument("commodity endpoint outside [0, node_count)");
        if (c.origin == c.destination)
            throw std::invalid_argument("commodity origin equals destination");
        if (!(c.demand >= 0.0))
            throw std::invalid_argument("commodity demand must be nonnegative");
    }

    // Group commodities by origin; grouping also drives per-origin
    // shortest-path reuse downstream.
    std::vector<int> order(commodities_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return commodities_[static_cast<size_t>(a)].origin < commodities_[static_cast<size_t>(b)].origin;
    });
    group_offsets_.push_back(0);
    for (int idx : order) {
        const int o = commodities_[static_cast<size_t>(idx)].origin;
        if (origins_.empty() || origins_.back() != o) {
            if (!origins_.empty()) group_offsets_.push_back(static_cast<int>(group_members_.size()));
            origins_.push_back(o);
        }
        group_members_.push_back(idx);
    }
    group_offsets_.push_back(static_cast<int>(group_members_.size()));

    for (size_t g = 0; g < origins_.size(); ++g) {
        const auto seen = reachable_from(network_, origins_[g]);
        for (int idx : commodities_of(static_cast<int>(g))) {
            const Commodity& c = commodities_[static_cast<size_t>(idx)];
            if (c.demand > 0.0 && !seen[static_cast<size_t>(c.destination)])
                throw InfeasibleError("destination " + std::to_string(c.destination) +
                                      " unreachable from origin " + std::to_string(c.origin));
        }
    }
}

std::span<const int> Instance::commodities_of(int origin_index) const {
    const size_t lo = static_cast<size_t>(group_offsets_[static_cast<size_t>(origin_index)]);
    const size_t hi = static_cast<size_t>(group_offsets_[static_cast<size_t>(origin_index) + 1]);
    return {group_members_.data() + lo, hi - lo};
}

namespace {
void require_shape(const Instance& instance, const FlowVector& flows) {
    if (static_cast<int>(flows.size()) != instance.network().edge_count())
        throw std::invalid_argument("flow vector length does not match edge count");
    for (double f : flows)
        if (!(f >= 0.0)) throw std::invalid_argument("negative edge flow");
}
}  // namespace

double total_cost(const Instance& instance, const FlowVector& flows) {
    require_shape(instance, flows);
    double acc = 0.0;
    const auto& edges = instance.network().edges();
    for (size_t e = 0; e < edges.size(); ++e)
        acc += edges[e].latency.value(flows[e]) * flows[e];
    return acc;
}

double beckmann_value(const Instance& instance, const FlowVector& flows) {
    require_shape(instance, flows);
    double acc = 0.0;
    const auto& edges = instance.network().edges();
    for (size_t e = 0; e < edges.size(); ++e) acc += edges[e].latency.integral(flows[e]);
    return acc;
}

Instance scale_demands(const Instance& instance, double epsilon) {
    if (!(epsilon >= 0.0)) throw std::domain_error("demand scaling requires epsilon >= 0");
    std::vector<Commodity> scaled = instance.commodities();
    for (Commodity& c : scaled) c.demand *= 1.0 + epsilon;
    return Instance(instance.network(), std::move(scaled));
}

}  // namespace wardrop
