#include "wardrop/tntp.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "wardrop/errors.hpp"

namespace wardrop {

namespace {

struct Line {
    std::string_view text;
    int number = 0;  // 1-based
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    int number = 1;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back({line, number++});
        if (end == text.size()) break;
        start = end + 1;
    }
    return lines;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_comment_or_blank(std::string_view s) {
    s = trim(s);
    return s.empty() || s.front() == '~';
}

// `<TAG> value` -> value; nullopt when the line is not that metadata tag.
std::optional<std::string_view> metadata_value(std::string_view line, std::string_view tag) {
    line = trim(line);
    if (line.size() < tag.size() + 2 || line.front() != '<') return std::nullopt;
    const size_t close = line.find('>');
    if (close == std::string_view::npos) return std::nullopt;
    if (trim(line.substr(1, close - 1)) != tag) return std::nullopt;
    return trim(line.substr(close + 1));
}

std::vector<std::string> tokenize(std::string_view s) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : s) {
        if (std::isspace(static_cast<unsigned char>(ch)) || ch == ';') {
            if (!current.empty()) tokens.push_back(std::move(current)), current.clear();
        } else {
            current.push_back(ch);
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

double parse_real(const std::string& token, int line) {
    try {
        size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + token + "'", line);
    }
}

int parse_int(const std::string& token, int line) {
    const double v = parse_real(token, line);
    if (v != std::floor(v)) throw ParseError("expected an integer, got '" + token + "'", line);
    return static_cast<int>(v);
}

PolynomialLatency bpr_to_polynomial(const BprRow& row, int line) {
    if (row.power < 0) throw ParseError("negative power", line);
    if (!(row.free_flow_time >= 0.0)) throw ParseError("negative free flow time", line);
    if (!(row.b_factor >= 0.0)) throw ParseError("negative b factor", line);
    std::vector<double> coeffs(static_cast<size_t>(row.power) + 1, 0.0);
    coeffs[0] = row.free_flow_time;
    if (row.b_factor > 0.0) {
        if (!(row.capacity > 0.0))
            throw ParseError("capacity must be positive when b > 0", line);
        const double base = row.free_flow_time == 0.0 ? 1.0 : row.free_flow_time;
        coeffs[static_cast<size_t>(row.power)] +=
            base * row.b_factor / std::pow(row.capacity, static_cast<double>(row.power));
    }
    return PolynomialLatency(std::move(coeffs));
}

}  // namespace

Network parse_net(std::string_view text) {
    const auto lines = split_lines(text);

    int node_count = -1, link_count = -1;
    size_t row_start = 0;
    for (size_t i = 0; i < lines.size(); ++i) {
        const auto& [line, number] = lines[i];
        if (is_comment_or_blank(line)) continue;
        if (trim(line).front() != '<') {
            row_start = i;  // data began without an END OF METADATA marker
            break;
        }
        if (auto v = metadata_value(line, "NUMBER OF NODES"))
            node_count = parse_int(std::string(*v), number);
        else if (auto v2 = metadata_value(line, "NUMBER OF LINKS"))
            link_count = parse_int(std::string(*v2), number);
        else if (metadata_value(line, "END OF METADATA")) {
            row_start = i + 1;
            break;
        }
        // other tags (<FIRST THRU NODE>, <NUMBER OF ZONES>, ...) are ignored
        row_start = i + 1;
    }
    if (node_count < 0)
        throw ParseError("missing <NUMBER OF NODES> metadata", lines.empty() ? 1 : lines.back().number);
    if (link_count < 0)
        throw ParseError("missing <NUMBER OF LINKS> metadata", lines.empty() ? 1 : lines.back().number);

    std::vector<Edge> edges;
    edges.reserve(static_cast<size_t>(link_count));
    for (size_t i = row_start; i < lines.size(); ++i) {
        const auto& [line, number] = lines[i];
        if (is_comment_or_blank(line)) continue;
        const auto tokens = tokenize(line);
        if (tokens.size() < 7)
            throw ParseError("link row needs at least 7 fields (init term capacity length fft b power)",
                             number);
        BprRow row;
        row.tail = parse_int(tokens[0], number);
        row.head = parse_int(tokens[1], number);
        row.capacity = parse_real(tokens[2], number);
        row.free_flow_time = parse_real(tokens[4], number);
        row.b_factor = parse_real(tokens[5], number);
        const double power = parse_real(tokens[6], number);
        if (power != std::floor(power))
            throw ParseError("unsupported latency: non-integer power '" + tokens[6] + "'", number);
        row.power = static_cast<int>(power);
        if (row.tail < 1 || row.tail > node_count || row.head < 1 || row.head > node_count)
            throw ParseError("node id outside [1, " + std::to_string(node_count) + "]", number);
        edges.push_back({row.tail - 1, row.head - 1, bpr_to_polynomial(row, number)});
    }
    if (static_cast<int>(edges.size()) != link_count)
        throw ParseError("found " + std::to_string(edges.size()) + " links, metadata declared " +
                             std::to_string(link_count),
                         lines.empty() ? 1 : lines.back().number);
    return Network(node_count, std::move(edges));
}

std::vector<Commodity> parse_trips(std::string_view text) {
    const auto lines = split_lines(text);
    std::vector<Commodity> commodities;
    int origin = -1;

    for (const auto& [line, number] : lines) {
        if (is_comment_or_blank(line)) continue;
        const std::string_view trimmed = trim(line);
        if (trimmed.front() == '<') continue;  // metadata
        if (trimmed.substr(0, 6) == "Origin") {
            const auto tokens = tokenize(trimmed.substr(6));
            if (tokens.size() != 1)
                throw ParseError("expected 'Origin <node>'", number);
            origin = parse_int(tokens[0], number);
            if (origin < 1) throw ParseError("origin id must be >= 1", number);
            continue;
        }
        if (origin < 0) throw ParseError("trip entry before any Origin header", number);
        // One or more `dest : flow ;` entries.
        size_t pos = 0;
        const std::string_view body = trimmed;
        while (pos < body.size()) {
            size_t end = body.find(';', pos);
            if (end == std::string_view::npos) end = body.size();
            const std::string_view piece = trim(body.substr(pos, end - pos));
            pos = end + 1;
            if (piece.empty()) continue;
            const size_t colon = piece.find(':');
            if (colon == std::string_view::npos)
                throw ParseError("expected 'destination : flow ;'", number);
            const auto dest_tokens = tokenize(piece.substr(0, colon));
            const auto flow_tokens = tokenize(piece.substr(colon + 1));
            if (dest_tokens.size() != 1 || flow_tokens.size() != 1)
                throw ParseError("expected 'destination : flow ;'", number);
            const int dest = parse_int(dest_tokens[0], number);
            const double flow = parse_real(flow_tokens[0], number);
            if (dest < 1) throw ParseError("destination id must be >= 1", number);
            if (flow < 0.0) throw ParseError("negative demand", number);
            if (flow == 0.0 || dest == origin) continue;
            commodities.push_back({origin - 1, dest - 1, flow});
        }
    }
    return commodities;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

Instance load_instance(const std::string& net_path, const std::string& trips_path) {
    Network network = [&] {
        try {
            return parse_net(read_file(net_path));
        } catch (const ParseError& e) {
            throw std::runtime_error(net_path + ": " + e.what());
        }
    }();
    std::vector<Commodity> commodities = [&] {
        try {
            return parse_trips(read_file(trips_path));
        } catch (const ParseError& e) {
            throw std::runtime_error(trips_path + ": " + e.what());
        }
    }();
    return Instance(std::move(network), std::move(commodities));
}

namespace {

std::string real17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

BprRow polynomial_to_bpr(const Edge& edge, int edge_id) {
    const auto coeffs = edge.latency.coefficients();
    BprRow row;
    row.tail = edge.tail + 1;
    row.head = edge.head + 1;
    row.capacity = 1.0;
    row.free_flow_time = coeffs[0];
    int term = -1;
    for (size_t m = 1; m < coeffs.size(); ++m) {
        if (coeffs[m] == 0.0) continue;
        if (term >= 0)
            throw std::invalid_argument("edge " + std::to_string(edge_id) +
                                        ": latency has several non-constant terms, not "
                                        "representable as one TNTP row");
        term = static_cast<int>(m);
    }
    if (term >= 0) {
        row.power = term;
        const double c = coeffs[static_cast<size_t>(term)];
        row.b_factor = row.free_flow_time == 0.0 ? c : c / row.free_flow_time;
    }
    return row;
}

}  // namespace

void write_net(const Network& network, std::ostream& out) {
    out << "<NUMBER OF NODES> " << network.node_count() << "\n";
    out << "<NUMBER OF LINKS> " << network.edge_count() << "\n";
    out << "<FIRST THRU NODE> 1\n";
    out << "<END OF METADATA>\n\n";
    out << "~ init term capacity length fft b power speed toll type ;\n";
    for (int e = 0; e < network.edge_count(); ++e) {
        const BprRow row = polynomial_to_bpr(network.edge(e), e);
        out << row.tail << "\t" << row.head << "\t" << real17(row.capacity) << "\t0\t"
            << real17(row.free_flow_time) << "\t" << real17(row.b_factor) << "\t" << row.power
            << "\t0\t0\t1\t;\n";
    }
    if (!out.flush()) throw std::runtime_error("net write failed");
}

void write_trips(const std::vector<Commodity>& commodities, std::ostream& out) {
    double total = 0.0;
    for (const Commodity& c : commodities) total += c.demand;
    out << "<TOTAL OD FLOW> " << real17(total) << "\n";
    out << "<END OF METADATA>\n\n";
    for (const Commodity& c : commodities) {
        out << "Origin " << c.origin + 1 << "\n";
        out << "    " << c.destination + 1 << " : " << real17(c.demand) << ";\n";
    }
    if (!out.flush()) throw std::runtime_error("trips write failed");
}

}  // namespace wardrop
