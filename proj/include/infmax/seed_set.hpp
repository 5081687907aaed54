#pragma once

#include <string>
#include <vector>

#include "infmax/graph.hpp"

namespace infmax {

/// A selected set of k seed nodes plus where it came from.
struct SeedSet {
    std::vector<NodeId> nodes;  // ascending
    std::string method;
    std::string params;
};

}  // namespace infmax
