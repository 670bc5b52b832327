#pragma once

#include <stdexcept>
#include <string>

#include "paragroup/connection.hpp"
#include "paragroup/fusion.hpp"
#include "paragroup/graph.hpp"

namespace paragroup {

/// Malformed or unreadable input files (CLI exit code 2).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

BipartiteGraph load_graph(const std::string& path);
void save_graph(const BipartiteGraph& g, const std::string& path);

ConnectionSquare load_connection(const std::string& path);
void save_connection(const ConnectionSquare& w, const std::string& path);

GroupData load_group(const std::string& path);
void save_group(const GroupData& g, const std::string& path);

FusionRing load_fusion(const std::string& path);
void save_fusion(const FusionRing& f, const std::string& path);

/// "builtin:<name>" (A2.., Z2.., S3), "group:<group file>" (builds the group
/// connection), or a connection file path.
ConnectionSquare resolve_connection(const std::string& spec);
/// "builtin:<name>" (trivial, Z<n>, S3, fib, su2e<k>) or a fusion file path.
FusionRing resolve_fusion(const std::string& spec);

}  // namespace paragroup
