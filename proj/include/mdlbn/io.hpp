#pragma once

#include <mdlbn/dataset.hpp>
#include <mdlbn/errors.hpp>
#include <mdlbn/graph.hpp>
#include <mdlbn/network.hpp>

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace mdlbn
{

inline std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ParseError("cannot write " + path.string());
    out << text;
    if (!out)
        throw ParseError("failed writing " + path.string());
}

namespace detail
{

inline std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_commas(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

} // namespace detail

/// Parses CSV text: a header of column names, then comma-separated numbers.
/// LF and CRLF line endings are accepted; blank lines are skipped.
inline RawDataset parse_csv(std::string_view text)
{
    RawDataset raw;
    std::size_t lineno = 0;
    bool have_header = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        const auto line = detail::trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        ++lineno;
        if (line.empty())
            continue;
        const auto fields = detail::split_commas(line);
        if (!have_header) {
            for (auto f : fields)
                raw.names.emplace_back(f);
            have_header = true;
            continue;
        }
        if (fields.size() != raw.names.size())
            throw ParseError("line " + std::to_string(lineno) + ": expected " +
                             std::to_string(raw.names.size()) + " fields, found " +
                             std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (auto f : fields) {
            double x = 0.0;
            const auto* end = f.data() + f.size();
            auto [ptr, ec] = std::from_chars(f.data(), end, x);
            if (f.empty() || ec != std::errc() || ptr != end || !std::isfinite(x))
                throw ParseError("line " + std::to_string(lineno) + ": non-numeric cell '" +
                                 std::string(f) + "'");
            row.push_back(x);
        }
        raw.rows.push_back(std::move(row));
    }
    if (!have_header)
        throw EmptyData("CSV has no header");
    if (raw.rows.empty())
        throw EmptyData("CSV has no data rows");
    return raw;
}

inline RawDataset load_csv(const std::filesystem::path& path) { return parse_csv(read_text(path)); }

/// CSV text of a discrete dataset with 1-based values.
inline std::string format_csv(const DiscreteDataset& data, const std::vector<std::string>& names)
{
    if (names.size() != data.cols())
        throw SizeMismatch("one column name per column is required");
    std::string out;
    out.reserve((data.rows() + 1) * data.cols() * 3);
    for (std::size_t c = 0; c < names.size(); ++c) {
        if (c)
            out += ',';
        out += names[c];
    }
    out += '\n';
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t c = 0; c < data.cols(); ++c) {
            if (c)
                out += ',';
            out += std::to_string(data.value(r, c) + 1);
        }
        out += '\n';
    }
    return out;
}

inline std::vector<std::string> default_names(std::size_t n)
{
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        names.push_back("X" + std::to_string(i + 1));
    return names;
}

/// Network spec JSON:
///   {"nodes": [{"name": "X1", "cardinality": 3}, ...],
///    "edges": [[1, 2], ...],
///    "cpt":   [{"node": 1, "config": 1, "probs": [...]}, ...]}
/// Indices are 1-based; "config" may be omitted for parentless nodes.
inline BnSpec parse_bn_spec(std::string_view text)
{
    using nlohmann::json;
    try {
        const auto j = json::parse(text);
        BnSpec s;
        for (const auto& node : j.at("nodes")) {
            s.names.push_back(node.value("name", "X" + std::to_string(s.names.size() + 1)));
            const auto card = node.at("cardinality").get<long long>();
            if (card < 1)
                throw SpecMismatch("network spec: cardinality must be at least 1");
            s.cardinalities.push_back(static_cast<std::size_t>(card));
        }
        const std::size_t n = s.cardinalities.size();
        std::vector<Edge> edges;
        for (const auto& e : j.value("edges", json::array())) {
            const auto p = e.at(0).get<long long>(), c = e.at(1).get<long long>();
            if (p < 1 || c < 1)
                throw InvalidEdge("network spec: node indices are 1-based");
            edges.push_back({static_cast<NodeId>(p - 1), static_cast<NodeId>(c - 1)});
        }
        s.dag = Dag(n, edges);

        s.cpt.resize(n);
        std::vector<std::vector<bool>> seen(n);
        for (NodeId i = 0; i < n; ++i) {
            const auto q = parent_configurations(s.dag, s.cardinalities, i);
            s.cpt[i].assign(q * s.cardinalities[i], 0.0);
            seen[i].assign(q, false);
        }
        for (const auto& row : j.at("cpt")) {
            const auto node = row.at("node").get<long long>();
            if (node < 1 || static_cast<std::size_t>(node) > n)
                throw SpecMismatch("network spec: cpt node out of range");
            const auto i = static_cast<NodeId>(node - 1);
            const auto config = row.value("config", 1LL);
            if (config < 1 || static_cast<std::size_t>(config) > seen[i].size())
                throw SpecMismatch("network spec: cpt config out of range for node " +
                                   std::to_string(node));
            const auto jx = static_cast<std::size_t>(config - 1);
            if (seen[i][jx])
                throw SpecMismatch("network spec: duplicate cpt row");
            seen[i][jx] = true;
            const auto probs = row.at("probs").get<std::vector<double>>();
            if (probs.size() != s.cardinalities[i])
                throw SpecMismatch("network spec: cpt row has the wrong length");
            std::copy(probs.begin(), probs.end(), s.cpt[i].begin() + jx * s.cardinalities[i]);
        }
        for (NodeId i = 0; i < n; ++i)
            for (bool ok : seen[i])
                if (!ok)
                    throw SpecMismatch("network spec: missing cpt row for node " +
                                       std::to_string(i + 1));
        s.validate();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("network spec: ") + e.what());
    }
}

inline std::string format_bn_spec(const BnSpec& s)
{
    using nlohmann::json;
    json j;
    j["nodes"] = json::array();
    for (NodeId i = 0; i < s.size(); ++i)
        j["nodes"].push_back({{"name", s.names.empty() ? "X" + std::to_string(i + 1) : s.names[i]},
                              {"cardinality", s.cardinalities[i]}});
    j["edges"] = json::array();
    for (const auto& e : s.dag.edges())
        j["edges"].push_back({e.parent + 1, e.child + 1});
    j["cpt"] = json::array();
    for (NodeId i = 0; i < s.size(); ++i) {
        const auto q = parent_configurations(s.dag, s.cardinalities, i);
        for (std::size_t c = 0; c < q; ++c) {
            const auto r = s.row(i, c);
            j["cpt"].push_back(
                {{"node", i + 1}, {"config", c + 1}, {"probs", std::vector<double>(r.begin(), r.end())}});
        }
    }
    return j.dump(2) + "\n";
}

/// Explosion spec JSON: {"node": 1, "groups": [[1/3, 2/3], [2/7, 4/7, 1/7], [1]]}.
/// Group v lists the replacement probabilities for original value v.
inline ExplosionSpec parse_explosion_spec(std::string_view text)
{
    try {
        const auto j = nlohmann::json::parse(text);
        ExplosionSpec s;
        const auto node = j.at("node").get<long long>();
        if (node < 1)
            throw SpecMismatch("explosion spec: node index is 1-based");
        s.node = static_cast<NodeId>(node - 1);
        s.groups = j.at("groups").get<std::vector<std::vector<double>>>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("explosion spec: ") + e.what());
    }
}

inline std::string format_explosion_spec(const ExplosionSpec& s)
{
    nlohmann::json j{{"node", s.node + 1}, {"groups", s.groups}};
    return j.dump(2) + "\n";
}

} // namespace mdlbn
