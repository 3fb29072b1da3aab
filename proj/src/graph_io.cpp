#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "dgauss/errors.hpp"
#include "dgauss/graphs.hpp"

namespace dgauss::graphs {

namespace {

Vertex parse_vertex(const std::string& token, const std::string& where) {
    unsigned long long value = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ValidationError(where + ": '" + token + "' is not a non-negative vertex id");
    }
    return static_cast<Vertex>(value);
}

} // namespace

RegularGraph parse_edge_list(std::istream& in, const std::string& source) {
    std::vector<Edge> edges;
    std::map<Edge, long> seen;
    Vertex largest = 0;
    bool any = false;
    std::string line;
    for (long lineno = 1; std::getline(in, line); ++lineno) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string a, b, extra;
        if (!(fields >> a)) continue;
        const std::string where = source + ":" + std::to_string(lineno);
        if (!(fields >> b)) throw ValidationError(where + ": expected two vertex ids");
        if (fields >> extra) throw ValidationError(where + ": unexpected token '" + extra + "'");
        const Vertex u = parse_vertex(a, where);
        const Vertex v = parse_vertex(b, where);
        if (u == v) throw ValidationError(where + ": self-loop at vertex " + std::to_string(u));
        const Edge key{std::min(u, v), std::max(u, v)};
        if (const auto [it, fresh] = seen.emplace(key, lineno); !fresh) {
            throw ValidationError(where + ": edge " + a + " " + b + " repeats line " + std::to_string(it->second));
        }
        edges.emplace_back(u, v);
        largest = std::max({largest, u, v});
        any = true;
    }
    if (!any) throw ValidationError(source + ": no edges");
    try {
        return RegularGraph::from_edges(largest + 1, edges);
    } catch (const ValidationError& e) {
        throw ValidationError(source + ": " + e.what());
    }
}

RegularGraph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open graph file " + path.string());
    return parse_edge_list(in, path.string());
}

} // namespace dgauss::graphs
