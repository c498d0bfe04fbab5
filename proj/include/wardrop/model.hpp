#ifndef WARDROP_MODEL_HPP
#define WARDROP_MODEL_HPP

#include <span>
#include <vector>

namespace wardrop {

/// Edge latency of the form l(x) = sum_m coeffs[m] * x^m with coeffs[m] >= 0,
/// so l is nonnegative and nondecreasing on [0, inf).
class PolynomialLatency {
public:
    /// Zero latency.
    PolynomialLatency();

    /// Dense coefficients indexed by power. Trailing zeros are kept as stored
    /// but do not count towards degree(). Throws std::invalid_argument on a
    /// negative coefficient.
    explicit PolynomialLatency(std::vector<double> coefficients);

    static PolynomialLatency constant(double value);
    static PolynomialLatency monomial(int power, double coefficient = 1.0);

    /// l(x). Throws std::domain_error for x < 0.
    double value(double x) const;

    /// l(x) + x * l'(x), the marginal cost of one unit of flow at x.
    double marginal(double x) const;

    /// integral_0^x l(u) du. Convex and nonnegative.
    double integral(double x) const;

    /// l'(x).
    double derivative(double x) const;

    /// Highest power with a nonzero coefficient; 0 for the zero latency.
    int degree() const { return degree_; }

    /// True when every coefficient above index 0 is below `tol` in magnitude.
    bool is_constant(double tol = 1e-15) const;

    /// Latency with coefficients (m+1)*coeffs[m]: the user-equilibrium problem
    /// under the transformed latencies is the system optimum of the original.
    PolynomialLatency marginal_transform() const;

    std::span<const double> coefficients() const { return coeffs_; }

private:
    std::vector<double> coeffs_;  // never empty
    int degree_ = 0;
};

struct Edge {
    int tail = 0;
    int head = 0;
    PolynomialLatency latency;
};

/// Directed graph with latency-annotated edges. Parallel edges and self-loops
/// are allowed; node ids are 0-based. Immutable after construction.
class Network {
public:
    Network(int node_count, std::vector<Edge> edges);

    int node_count() const { return node_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[static_cast<size_t>(e)]; }

    /// Outgoing edge ids of `node`, in ascending id order.
    std::span<const int> outgoing(int node) const;

    /// Maximum latency degree over all edges.
    int degree() const { return degree_; }

private:
    int node_count_;
    std::vector<Edge> edges_;
    std::vector<int> adj_offsets_;  // size node_count_+1
    std::vector<int> adj_edges_;    // size edge_count()
    int degree_ = 0;
};

struct Commodity {
    int origin = 0;
    int destination = 0;
    double demand = 0.0;
};

/// Aggregate flow per edge, aligned with Network::edges(). All entries >= 0.
using FlowVector = std::vector<double>;

/// A routing problem: a network plus origin-destination demands. Validates at
/// construction that every commodity with positive demand can be routed.
class Instance {
public:
    Instance(Network network, std::vector<Commodity> commodities);

    const Network& network() const { return network_; }
    const std::vector<Commodity>& commodities() const { return commodities_; }
    int degree() const { return network_.degree(); }

    /// Distinct commodity origins, ascending.
    std::span<const int> origins() const { return origins_; }

    /// Indices of commodities sharing origins()[origin_index].
    std::span<const int> commodities_of(int origin_index) const;

private:
    Network network_;
    std::vector<Commodity> commodities_;
    std::vector<int> origins_;
    std::vector<int> group_offsets_;  // size origins_.size()+1
    std::vector<int> group_members_;  // commodity indices grouped by origin
};

/// C(f) = sum_e l_e(f_e) * f_e. Throws std::invalid_argument on a shape
/// mismatch or a negative flow entry.
double total_cost(const Instance& instance, const FlowVector& flows);

/// sum_e integral_0^{f_e} l_e(u) du, the potential whose minimizers over
/// feasible flows are exactly the user equilibria.
double beckmann_value(const Instance& instance, const FlowVector& flows);

/// New instance with every demand multiplied by (1+epsilon). Throws
/// std::domain_error for epsilon < 0.
Instance scale_demands(const Instance& instance, double epsilon);

}  // namespace wardrop

#endif
