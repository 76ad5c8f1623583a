#include "fountain/tanner.hpp"

#include <algorithm>
#include <sstream>

#include "fountain/errors.hpp"
#include "fountain/lt.hpp"

namespace fountain {

std::vector<std::size_t> TannerGraph::input_degrees() const {
    std::vector<std::size_t> deg(input_nodes, 0);
    for (const auto& e : edges) ++deg[e.second];
    return deg;
}

std::string TannerGraph::to_dot() const {
    std::ostringstream os;
    os << "graph tanner {\n";
    for (std::size_t i = 0; i < input_nodes; ++i) os << "  c" << i + 1 << " [shape=circle];\n";
    for (std::size_t j = 0; j < coded_nodes; ++j) os << "  x" << j + 1 << " [shape=box];\n";
    for (const auto& [j, i] : edges) os << "  x" << j + 1 << " -- c" << i + 1 << ";\n";
    os << "}\n";
    return os.str();
}

TannerGraph tanner_graph(const std::vector<CodedPacket>& packets, std::size_t k) {
    if (k == 0) throw UsageError("k must be positive");
    TannerGraph g;
    g.input_nodes = k;
    g.coded_nodes = packets.size();
    for (std::size_t j = 0; j < packets.size(); ++j) {
        const CodedPacket& p = packets[j];
        if (!is_binary_scheme(p.scheme))
            throw UsageError(std::string(to_string(p.scheme)) + " packets have no binary Tanner graph");
        if (p.k != k) throw UsageError("packet k differs from the graph's k");
        const auto support = binary_support(p);
        for (const auto i : support) {
            g.input_nodes = std::max<std::size_t>(g.input_nodes, i + 1);
            g.edges.emplace_back(static_cast<std::uint32_t>(j), i);
        }
        g.coded_degrees.push_back(support.size());
    }
    g.regular = !g.coded_degrees.empty() &&
                std::all_of(g.coded_degrees.begin(), g.coded_degrees.end(),
                            [&](std::size_t d) { return d == g.coded_degrees.front(); });
    return g;
}

}  // namespace fountain
