#include "fmvol/instance_io.hpp"

#include <fstream>
#include <sstream>

#include "fmvol/errors.hpp"

namespace fmvol {

Hypergraph parse_instance(std::istream& in) {
    std::vector<std::vector<int>> edges;
    int max_id = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream tokens(line);
        std::vector<int> edge;
        std::string tok;
        while (tokens >> tok) {
            size_t pos = 0;
            int v;
            try {
                v = std::stoi(tok, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != tok.size() || v < 0)
                throw ParseError("line " + std::to_string(lineno) +
                                 ": bad vertex id '" + tok + "'");
            if (std::find(edge.begin(), edge.end(), v) != edge.end())
                throw ParseError("line " + std::to_string(lineno) +
                                 ": duplicate vertex " + std::to_string(v) +
                                 " in hyperedge");
            edge.push_back(v);
            max_id = std::max(max_id, v);
        }
        edges.push_back(std::move(edge));
    }
    if (edges.empty())
        throw ParseError("instance contains no hyperedges");
    try {
        return Hypergraph(max_id + 1, std::move(edges));
    } catch (const ArgumentError& e) {
        throw ParseError(e.what());
    }
}

Hypergraph load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open instance file: " + path);
    return parse_instance(in);
}

} // namespace fmvol
