#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fountain/packet.hpp"

namespace fountain {

/// Bipartite graph between input nodes and coded nodes. For Raptor packets the
/// input side holds the k + j intermediate packets.
struct TannerGraph {
    std::size_t input_nodes = 0;
    std::size_t coded_nodes = 0;
    /// (coded index, input index), grouped by coded node in ascending input order.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<std::size_t> coded_degrees;
    /// Every coded node has the same degree.
    bool regular = false;

    std::vector<std::size_t> input_degrees() const;
    /// Graphviz rendering, inputs as c<i> and coded nodes as x<j>.
    std::string to_dot() const;
};

/// Throws UsageError for schemes whose coding vectors are not binary or when
/// packets disagree on k.
TannerGraph tanner_graph(const std::vector<CodedPacket>& packets, std::size_t k);

}  // namespace fountain
