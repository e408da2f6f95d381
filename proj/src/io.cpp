#include "daggr/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "daggr/errors.hpp"

namespace daggr::io {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "' for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            if (!cur.empty() && cur.back() == '\r') {
                cur.pop_back();
            }
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) {
        if (cur.back() == '\r') {
            cur.pop_back();
        }
        lines.push_back(cur);
    }
    // Trailing blank lines are not data.
    while (!lines.empty() && lines.back().empty()) {
        lines.pop_back();
    }
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

bool try_parse_double(const std::string& field, double& value) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) {
        ++begin;
    }
    while (end > begin && (end[-1] == ' ' || end[-1] == '\t')) {
        --end;
    }
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    return ec == std::errc() && ptr == end && begin != end;
}

// Parses one CSV line of doubles; line_no/1-based field position feed
// diagnostics.
std::vector<double> parse_numeric_line(const std::string& line, int line_no) {
    const auto fields = split_fields(line);
    std::vector<double> values(fields.size());
    for (std::size_t f = 0; f < fields.size(); ++f) {
        if (!try_parse_double(fields[f], values[f])) {
            throw ParseError("malformed number '" + fields[f] + "'", line_no,
                             static_cast<int>(f + 1));
        }
    }
    return values;
}

Eigen::MatrixXd rows_to_matrix(const std::vector<std::vector<double>>& rows,
                               int first_line_no) {
    if (rows.empty()) {
        throw ParseError("no data rows", first_line_no, 1);
    }
    const std::size_t cols = rows.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw ParseError("row has " + std::to_string(rows[r].size()) +
                                 " fields, expected " + std::to_string(cols),
                             first_line_no + static_cast<int>(r), 1);
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return m;
}

int require_int(const ordered_json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
        throw ParseError(std::string("missing or non-integer field '") + key + "'");
    }
    return j[key].get<int>();
}

}  // namespace

void save_data_csv(const std::string& path, const Eigen::MatrixXd& x) {
    auto out = open_out(path);
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        out << (j == 0 ? "x" : ",x") << j;
    }
    out << '\n';
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            if (j > 0) {
                out << ',';
            }
            out << fmt17(x(r, j));
        }
        out << '\n';
    }
    if (!out) {
        throw Error("failed writing '" + path + "'");
    }
}

Eigen::MatrixXd load_data_csv(const std::string& path) {
    const auto lines = split_lines(slurp(path));
    if (lines.empty()) {
        throw ParseError("'" + path + "' is empty", 1, 1);
    }
    // First line must be a header; a fully numeric first line means one is
    // missing.
    {
        const auto fields = split_fields(lines[0]);
        bool all_numeric = true;
        double ignored = 0.0;
        for (const auto& f : fields) {
            if (!try_parse_double(f, ignored)) {
                all_numeric = false;
                break;
            }
        }
        if (all_numeric) {
            throw ParseError("expected a header row of variable names", 1, 1);
        }
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(lines.size() - 1);
    for (std::size_t l = 1; l < lines.size(); ++l) {
        rows.push_back(parse_numeric_line(lines[l], static_cast<int>(l + 1)));
    }
    return rows_to_matrix(rows, 2);
}

void save_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
    auto out = open_out(path);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out << ',';
            }
            out << fmt17(m(r, j));
        }
        out << '\n';
    }
    if (!out) {
        throw Error("failed writing '" + path + "'");
    }
}

Eigen::MatrixXd load_matrix_csv(const std::string& path) {
    const auto lines = split_lines(slurp(path));
    std::vector<std::vector<double>> rows;
    rows.reserve(lines.size());
    for (std::size_t l = 0; l < lines.size(); ++l) {
        rows.push_back(parse_numeric_line(lines[l], static_cast<int>(l + 1)));
    }
    return rows_to_matrix(rows, 1);
}

void log_transform(Eigen::MatrixXd& x) {
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            if (!(x(r, j) > 0.0)) {
                // 1-based, matching the CSV diagnostics.
                throw DomainError("log transform requires strictly positive values; "
                                  "entry at row " + std::to_string(r + 1) + ", column " +
                                  std::to_string(j + 1) + " is " + fmt17(x(r, j)));
            }
        }
    }
    x = x.array().log();
}

CandidateDoc load_candidate(const std::string& path) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(slurp(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("'" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("'" + path + "' must hold a JSON object");
    }
    const int p = require_int(doc, "p");
    if (p < 1) {
        throw ParseError("'p' must be positive, got " + std::to_string(p));
    }

    CandidateDoc out;
    out.candidate.structure = EdgeSet(p);
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) {
            throw ParseError("'name' must be a string");
        }
        out.candidate.name = doc["name"].get<std::string>();
    }

    Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(p, p);
    int with_coef = 0;
    int n_edges = 0;
    if (doc.contains("edges")) {
        if (!doc["edges"].is_array()) {
            throw ParseError("'edges' must be an array");
        }
        for (const auto& e : doc["edges"]) {
            if (!e.is_object()) {
                throw ParseError("each edge must be an object");
            }
            const int from = require_int(e, "from");
            const int to = require_int(e, "to");
            if (from < 0 || from >= p || to < 0 || to >= p) {
                throw ParseError("edge (" + std::to_string(from) + ", " +
                                 std::to_string(to) + ") out of range for p = " +
                                 std::to_string(p));
            }
            if (from == to) {
                throw ParseError("self-loop at node " + std::to_string(from));
            }
            if (out.candidate.structure.contains(from, to)) {
                throw ParseError("duplicate edge (" + std::to_string(from) + ", " +
                                 std::to_string(to) + ")");
            }
            out.candidate.structure.insert(from, to);
            ++n_edges;
            if (e.contains("coef")) {
                if (!e["coef"].is_number()) {
                    throw ParseError("'coef' must be a number");
                }
                const double value = e["coef"].get<double>();
                if (!std::isfinite(value)) {
                    throw ParseError("'coef' must be finite");
                }
                coef(from, to) = value;
                ++with_coef;
            }
        }
    }
    if (with_coef != 0 && with_coef != n_edges) {
        throw ParseError("either every edge carries 'coef' or none does");
    }
    if (with_coef == n_edges && n_edges > 0) {
        out.candidate.coef = std::move(coef);
    }

    if (doc.contains("node_sigmas")) {
        if (!doc["node_sigmas"].is_array() ||
            static_cast<int>(doc["node_sigmas"].size()) != p) {
            throw ParseError("'node_sigmas' must be an array of length " +
                             std::to_string(p));
        }
        Eigen::VectorXd sig(p);
        for (int j = 0; j < p; ++j) {
            const auto& v = doc["node_sigmas"][j];
            if (!v.is_number()) {
                throw ParseError("'node_sigmas' entries must be numbers");
            }
            sig(j) = v.get<double>();
            if (!(sig(j) > 0.0) || !std::isfinite(sig(j))) {
                throw ParseError("'node_sigmas' entries must be positive and finite");
            }
        }
        out.node_sigmas = std::move(sig);
    }

    // Cyclic structures are rejected outright, naming one cycle.
    Eigen::MatrixXd support = Eigen::MatrixXd::Zero(p, p);
    for (const auto& [i, j] : out.candidate.structure.edges) {
        support(i, j) = 1.0;
    }
    if (auto cycle = find_cycle(support)) {
        const std::string msg = "candidate '" + out.candidate.name +
                                "' contains a directed cycle: " + format_cycle(*cycle);
        throw CycleError(msg, std::move(*cycle));
    }
    return out;
}

void save_candidate(const std::string& path, const std::string& name,
                    const Eigen::MatrixXd& adj,
                    const std::optional<Eigen::VectorXd>& node_sigmas) {
    if (adj.rows() != adj.cols()) {
        throw DimensionError("adjacency matrix must be square");
    }
    const int p = static_cast<int>(adj.rows());
    ordered_json doc;
    doc["p"] = p;
    if (!name.empty()) {
        doc["name"] = name;
    }
    doc["edges"] = ordered_json::array();
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (i != j && adj(i, j) != 0.0) {
                doc["edges"].push_back({{"from", i}, {"to", j}, {"coef", adj(i, j)}});
            }
        }
    }
    if (node_sigmas) {
        doc["node_sigmas"] = std::vector<double>(
            node_sigmas->data(), node_sigmas->data() + node_sigmas->size());
    }
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

void save_weights(const std::string& path, const AggregationConfig& cfg,
                  const std::vector<std::string>& names, const Eigen::VectorXd& w) {
    ordered_json doc;
    doc["lambda"] = cfg.lambda;
    doc["gamma"] = cfg.gamma;
    doc["splits"] = cfg.splits;
    doc["hetero"] = cfg.hetero;
    doc["rng_seed"] = cfg.rng_seed;
    doc["names"] = names;
    doc["weights"] = std::vector<double>(w.data(), w.data() + w.size());
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

Eigen::VectorXd load_weights(const std::string& path) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(slurp(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("'" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object() || !doc.contains("weights") || !doc["weights"].is_array()) {
        throw ParseError("'" + path + "' must hold an object with a 'weights' array");
    }
    const auto& arr = doc["weights"];
    Eigen::VectorXd w(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t k = 0; k < arr.size(); ++k) {
        if (!arr[k].is_number()) {
            throw ParseError("'weights' entries must be numbers");
        }
        w(static_cast<Eigen::Index>(k)) = arr[k].get<double>();
    }
    return w;
}

void save_importance(const std::string& path, const Eigen::MatrixXd& s) {
    if (s.rows() != s.cols()) {
        throw DimensionError("importance matrix must be square");
    }
    ordered_json doc;
    doc["p"] = static_cast<int>(s.rows());
    doc["scores"] = ordered_json::array();
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < s.cols(); ++j) {
            row.push_back(s(i, j));
        }
        doc["scores"].push_back(std::move(row));
    }
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

Eigen::MatrixXd load_importance(const std::string& path) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(slurp(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("'" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("'" + path + "' must hold a JSON object");
    }
    const int p = require_int(doc, "p");
    if (!doc.contains("scores") || !doc["scores"].is_array() ||
        static_cast<int>(doc["scores"].size()) != p) {
        throw ParseError("'scores' must be a " + std::to_string(p) + " x " +
                         std::to_string(p) + " array");
    }
    Eigen::MatrixXd s(p, p);
    for (int i = 0; i < p; ++i) {
        const auto& row = doc["scores"][i];
        if (!row.is_array() || static_cast<int>(row.size()) != p) {
            throw ParseError("'scores' row " + std::to_string(i) + " must have " +
                             std::to_string(p) + " entries");
        }
        for (int j = 0; j < p; ++j) {
            if (!row[j].is_number()) {
                throw ParseError("'scores' entries must be numbers");
            }
            s(i, j) = row[j].get<double>();
            if (!std::isfinite(s(i, j))) {
                throw ParseError("'scores' entries must be finite");
            }
        }
    }
    return s;
}

void save_pdag(const std::string& path, const Pdag& pdag) {
    ordered_json doc;
    doc["p"] = pdag.directed.p;
    doc["directed"] = ordered_json::array();
    for (const auto& [i, j] : pdag.directed.edges) {
        doc["directed"].push_back({{"from", i}, {"to", j}});
    }
    doc["undirected"] = ordered_json::array();
    for (const auto& [a, b] : pdag.undirected) {
        doc["undirected"].push_back({{"a", a}, {"b", b}});
    }
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

namespace {

ordered_json summary_json(const MetricSummary& m) {
    return {{"mean", m.mean}, {"se", m.se}, {"median", m.median}};
}

}  // namespace

std::string bench_report_json(const BenchReport& report) {
    ordered_json doc;
    doc["sim"] = {{"structure", to_string(report.sim.structure)},
                  {"p", report.sim.p},
                  {"n", report.sim.n},
                  {"signal", to_string(report.sim.signal)},
                  {"edge_prob", report.sim.edge_prob},
                  {"replications", report.sim.replications},
                  {"rng_seed", report.sim.rng_seed}};
    doc["aggregation"] = {{"lambda", report.agg.lambda},
                          {"gamma", report.agg.gamma},
                          {"splits", report.agg.splits},
                          {"hetero", report.agg.hetero}};
    doc["prune_thresholds"] = report.prune_thresholds;
    doc["rows"] = ordered_json::array();
    for (const auto& row : report.rows) {
        ordered_json r;
        r["method"] = row.method;
        if (row.weight) {
            r["weight"] = summary_json(*row.weight);
        }
        r["frob_sq"] = summary_json(row.frob_sq);
        r["fnr"] = summary_json(row.fnr);
        r["mcc"] = summary_json(row.mcc);
        r["shd"] = summary_json(row.shd);
        r["fpr"] = summary_json(row.fpr);
        r["fdr"] = summary_json(row.fdr);
        r["kl"] = summary_json(row.kl);
        doc["rows"].push_back(std::move(r));
    }
    return doc.dump(2) + "\n";
}

std::string bench_report_table(const BenchReport& report) {
    auto cell = [](const MetricSummary& m) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3f (%.3f)", m.mean, m.se);
        return std::string(buf);
    };
    const std::vector<std::string> headers = {"method", "weight",  "sq_err", "fnr",
                                              "mcc",    "shd",     "fpr",    "fdr",
                                              "kl"};
    std::vector<std::vector<std::string>> grid;
    grid.push_back(headers);
    for (const auto& row : report.rows) {
        std::vector<std::string> cells;
        cells.push_back(row.method);
        cells.push_back(row.weight ? cell(*row.weight) : "-");
        cells.push_back(cell(row.frob_sq));
        cells.push_back(cell(row.fnr));
        cells.push_back(cell(row.mcc));
        cells.push_back(cell(row.shd));
        cells.push_back(cell(row.fpr));
        cells.push_back(cell(row.fdr));
        cells.push_back(cell(row.kl));
        grid.push_back(std::move(cells));
    }
    std::vector<std::size_t> width(headers.size(), 0);
    for (const auto& row : grid) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            width[c] = std::max(width[c], row[c].size());
        }
    }
    std::ostringstream out;
    char head[256];
    std::snprintf(head, sizeof(head), "%s p=%d n=%d %s, %d replications\n",
                  to_string(report.sim.structure), report.sim.p, report.sim.n,
                  to_string(report.sim.signal), report.sim.replications);
    out << head;
    for (std::size_t r = 0; r < grid.size(); ++r) {
        for (std::size_t c = 0; c < grid[r].size(); ++c) {
            if (c > 0) {
                out << "  ";
            }
            out << grid[r][c];
            for (std::size_t pad = grid[r][c].size(); pad < width[c]; ++pad) {
                out << ' ';
            }
        }
        out << '\n';
        if (r == 0) {
            for (std::size_t c = 0; c < width.size(); ++c) {
                if (c > 0) {
                    out << "  ";
                }
                out << std::string(width[c], '-');
            }
            out << '\n';
        }
    }
    return out.str();
}

std::string error_json(const std::exception& e) {
    ordered_json err;
    const char* type = "internal";
    if (dynamic_cast<const CycleError*>(&e) != nullptr) {
        type = "cycle";
    } else if (dynamic_cast<const DimensionError*>(&e) != nullptr) {
        type = "dimension";
    } else if (dynamic_cast<const DomainError*>(&e) != nullptr) {
        type = "domain";
    } else if (dynamic_cast<const NumericError*>(&e) != nullptr) {
        type = "numeric";
    } else if (dynamic_cast<const ParseError*>(&e) != nullptr) {
        type = "parse";
    } else if (dynamic_cast<const Error*>(&e) != nullptr) {
        type = "error";
    }
    err["type"] = type;
    err["message"] = e.what();
    if (const auto* cyc = dynamic_cast<const CycleError*>(&e)) {
        err["cycle"] = cyc->cycle;
    }
    if (const auto* parse = dynamic_cast<const ParseError*>(&e)) {
        if (parse->line > 0) {
            err["line"] = parse->line;
        }
        if (parse->column > 0) {
            err["column"] = parse->column;
        }
    }
    ordered_json doc;
    doc["error"] = std::move(err);
    return doc.dump() + "\n";
}

}  // namespace daggr::io
