#ifndef WARDROP_TNTP_HPP
#define WARDROP_TNTP_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "wardrop/model.hpp"

namespace wardrop {

/// One link row of a TNTP net file. Latency is the BPR curve
/// fft * (1 + b * (x/capacity)^power); rows with fft == 0 and b > 0 are read
/// as the pure monomial b * (x/capacity)^power so that zero-intercept
/// latencies stay representable.
struct BprRow {
    int tail = 0;  // 1-based in the file
    int head = 0;
    double capacity = 0.0;
    double free_flow_time = 0.0;
    double b_factor = 0.0;
    int power = 0;
};

/// Parses a TNTP net file body. Requires <NUMBER OF NODES> and
/// <NUMBER OF LINKS> metadata; `~` starts a comment; data rows are
/// whitespace-separated `init term capacity length fft b power ...  ;`.
/// Throws ParseError (with a line number) on malformed input, a non-integer
/// power, or a row count that contradicts the metadata.
Network parse_net(std::string_view text);

/// Parses a TNTP trips file body: `Origin o` headers followed by
/// `dest : flow ;` entries. Zero-flow entries and self pairs are dropped.
std::vector<Commodity> parse_trips(std::string_view text);

/// parse_net + parse_trips from files; errors name the offending file.
Instance load_instance(const std::string& net_path, const std::string& trips_path);

/// Writes a net file that parse_net maps back to the same network. Latencies
/// must have at most one non-constant term (all TNTP-parsed and generator
/// networks qualify); otherwise throws std::invalid_argument.
void write_net(const Network& network, std::ostream& out);

/// One Origin block per commodity, in order, so a parse round-trip preserves
/// the commodity sequence.
void write_trips(const std::vector<Commodity>& commodities, std::ostream& out);

std::string read_file(const std::string& path);

}  // namespace wardrop

#endif
