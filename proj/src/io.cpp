#include "lagnet/io.hpp"

#include "lagnet/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lagnet::io {

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

std::string trim(std::string_view text) {
    std::size_t first = 0;
    std::size_t last = text.size();
    while (first < last && std::isspace(static_cast<unsigned char>(text[first]))) {
        ++first;
    }
    while (last > first && std::isspace(static_cast<unsigned char>(text[last - 1]))) {
        --last;
    }
    return std::string(text.substr(first, last - first));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(trim(std::string_view(line).substr(start)));
            break;
        }
        fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

std::string lower(std::string text) {
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return text;
}

double parse_number(const std::string& field, const std::string& where) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ValidationError("unparseable number '" + field + "' at " + where);
    }
    return value;
}

bool is_missing_cell(const std::string& field) {
    const std::string low = lower(field);
    return field.empty() || low == "na" || low == "nan";
}

/// Non-comment, non-blank lines of a text file.
std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open '" + path.string() + "'");
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty()) {
            continue;
        }
        lines.push_back(line);
    }
    return lines;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary); // \n endings on every platform
    if (!out) {
        throw ValidationError("cannot write '" + path.string() + "'");
    }
    return out;
}

} // namespace

PricePanel read_price_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    std::size_t first_data = 0;
    while (first_data < lines.size() && lines[first_data][0] == '#') {
        ++first_data;
    }
    if (first_data >= lines.size()) {
        throw ValidationError("'" + path.string() + "' has no header line");
    }
    const std::vector<std::string> header = split_csv(lines[first_data]);
    if (header.empty() || lower(header[0]) != "date") {
        throw ValidationError("'" + path.string() + "' must start with a 'date' header column");
    }

    const bool long_format =
        header.size() == 3 && lower(header[1]) == "label" && lower(header[2]) == "price";
    if (long_format) {
        std::vector<PriceRow> rows;
        for (std::size_t k = first_data + 1; k < lines.size(); ++k) {
            if (lines[k][0] == '#') {
                continue;
            }
            const std::vector<std::string> fields = split_csv(lines[k]);
            if (fields.size() != 3) {
                throw ValidationError("expected 3 fields on line " + std::to_string(k + 1) +
                                      " of '" + path.string() + "'");
            }
            rows.push_back(PriceRow{parse_date(fields[0]), fields[1],
                                    parse_number(fields[2], "line " + std::to_string(k + 1))});
        }
        return load_price_table(rows);
    }

    if (header.size() < 2) {
        throw ValidationError("wide price table needs at least one series column");
    }
    const std::vector<std::string> labels(header.begin() + 1, header.end());
    struct Row {
        Date date;
        std::vector<std::string> fields;
    };
    std::vector<Row> rows;
    for (std::size_t k = first_data + 1; k < lines.size(); ++k) {
        if (lines[k][0] == '#') {
            continue;
        }
        std::vector<std::string> fields = split_csv(lines[k]);
        if (fields.size() != header.size()) {
            throw ValidationError("expected " + std::to_string(header.size()) +
                                  " fields on line " + std::to_string(k + 1) + " of '" +
                                  path.string() + "'");
        }
        rows.push_back(Row{parse_date(fields[0]), std::move(fields)});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.date < b.date; });
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].date == rows[r - 1].date) {
            throw ValidationError("duplicate date " + format_date(rows[r].date) + " in '" +
                                  path.string() + "'");
        }
    }

    std::vector<Date> dates;
    dates.reserve(rows.size());
    Eigen::MatrixXd prices(static_cast<Eigen::Index>(rows.size()),
                           static_cast<Eigen::Index>(labels.size()));
    BoolMatrix missing = BoolMatrix::Constant(prices.rows(), prices.cols(), false);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        dates.push_back(rows[r].date);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const std::string& cell = rows[r].fields[i + 1];
            if (is_missing_cell(cell)) {
                missing(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = true;
                prices(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = 0.0;
            } else {
                prices(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = parse_number(
                    cell, "(" + format_date(rows[r].date) + ", " + labels[i] + ")");
            }
        }
    }
    return PricePanel(std::move(dates), labels, std::move(prices), std::move(missing));
}

void write_price_csv(const std::filesystem::path& path, const PricePanel& panel) {
    auto out = open_out(path);
    out << "date";
    for (const auto& label : panel.labels()) {
        out << ',' << label;
    }
    out << '\n';
    for (Eigen::Index t = 0; t < panel.rows(); ++t) {
        out << format_date(panel.dates()[static_cast<std::size_t>(t)]);
        for (Eigen::Index i = 0; i < panel.cols(); ++i) {
            out << ',';
            if (!panel.missing()(t, i)) {
                out << format_double(panel.prices()(t, i));
            }
        }
        out << '\n';
    }
}

void write_return_csv(const std::filesystem::path& path, const ReturnPanel& panel) {
    auto out = open_out(path);
    if (panel.frequency() == Frequency::weekly) {
        out << "# frequency=weekly\n";
    }
    out << "date";
    for (const auto& label : panel.labels()) {
        out << ',' << label.str();
    }
    out << '\n';
    for (Eigen::Index t = 0; t < panel.rows(); ++t) {
        out << format_date(panel.dates()[static_cast<std::size_t>(t)]);
        for (Eigen::Index i = 0; i < panel.cols(); ++i) {
            out << ',' << format_double(panel.returns()(t, i));
        }
        out << '\n';
    }
}

ReturnPanel read_return_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    Frequency frequency = Frequency::daily;
    std::size_t first_data = 0;
    while (first_data < lines.size() && lines[first_data][0] == '#') {
        if (trim(lines[first_data].substr(1)) == "frequency=weekly") {
            frequency = Frequency::weekly;
        }
        ++first_data;
    }
    if (first_data >= lines.size()) {
        throw ValidationError("'" + path.string() + "' has no header line");
    }
    const std::vector<std::string> header = split_csv(lines[first_data]);
    if (header.size() < 2 || lower(header[0]) != "date") {
        throw ValidationError("'" + path.string() + "' is not a wide return table");
    }
    std::vector<SeriesLabel> labels;
    labels.reserve(header.size() - 1);
    for (std::size_t i = 1; i < header.size(); ++i) {
        labels.push_back(SeriesLabel::parse(header[i]));
    }
    std::vector<Date> dates;
    std::vector<std::vector<double>> values;
    for (std::size_t k = first_data + 1; k < lines.size(); ++k) {
        if (lines[k][0] == '#') {
            continue;
        }
        const std::vector<std::string> fields = split_csv(lines[k]);
        if (fields.size() != header.size()) {
            throw ValidationError("expected " + std::to_string(header.size()) +
                                  " fields on line " + std::to_string(k + 1) + " of '" +
                                  path.string() + "'");
        }
        dates.push_back(parse_date(fields[0]));
        std::vector<double> row;
        row.reserve(labels.size());
        for (std::size_t i = 1; i < fields.size(); ++i) {
            row.push_back(parse_number(fields[i], "line " + std::to_string(k + 1)));
        }
        values.push_back(std::move(row));
    }
    Eigen::MatrixXd returns(static_cast<Eigen::Index>(values.size()),
                            static_cast<Eigen::Index>(labels.size()));
    for (std::size_t t = 0; t < values.size(); ++t) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            returns(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) = values[t][i];
        }
    }
    return ReturnPanel(std::move(dates), std::move(labels), std::move(returns), frequency);
}

void write_matrix_csv(const std::filesystem::path& path, const std::vector<SeriesLabel>& labels,
                      const Eigen::MatrixXd& values) {
    auto out = open_out(path);
    out << "label";
    for (const auto& label : labels) {
        out << ',' << label.str();
    }
    out << '\n';
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        out << labels[static_cast<std::size_t>(i)].str();
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            out << ',' << format_double(values(i, j));
        }
        out << '\n';
    }
}

namespace {

std::vector<std::string> label_strings(const std::vector<SeriesLabel>& labels) {
    std::vector<std::string> out;
    out.reserve(labels.size());
    for (const auto& label : labels) {
        out.push_back(label.str());
    }
    return out;
}

std::vector<SeriesLabel> labels_from_json(const nlohmann::json& j) {
    std::vector<SeriesLabel> labels;
    for (const auto& item : j) {
        labels.push_back(SeriesLabel::parse(item.get<std::string>()));
    }
    return labels;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) {
        throw ValidationError("empty matrix in JSON");
    }
    const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw ValidationError("ragged matrix in JSON");
        }
        for (Eigen::Index k = 0; k < cols; ++k) {
            m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
        }
    }
    return m;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v[i]);
    }
    return out;
}

} // namespace

nlohmann::json correlation_to_json(const CorrelationMatrix& corr) {
    return nlohmann::json{{"labels", label_strings(corr.labels)},
                          {"method", method_name(corr.method)},
                          {"sample_size", corr.sample_size},
                          {"values", matrix_to_json(corr.values)}};
}

CorrelationMatrix correlation_from_json(const nlohmann::json& j) {
    CorrelationMatrix corr;
    corr.labels = labels_from_json(j.at("labels"));
    corr.method = parse_method(j.at("method").get<std::string>());
    corr.sample_size = j.at("sample_size").get<Eigen::Index>();
    corr.values = matrix_from_json(j.at("values"));
    if (corr.values.rows() != corr.values.cols() ||
        corr.values.rows() != static_cast<Eigen::Index>(corr.labels.size())) {
        throw ValidationError("correlation JSON dimensions do not match labels");
    }
    return corr;
}

nlohmann::json distance_to_json(const DistanceMatrix& dist) {
    return nlohmann::json{{"labels", label_strings(dist.labels)},
                          {"values", matrix_to_json(dist.values)}};
}

DistanceMatrix distance_from_json(const nlohmann::json& j) {
    DistanceMatrix dist;
    dist.labels = labels_from_json(j.at("labels"));
    dist.values = matrix_from_json(j.at("values"));
    if (dist.values.rows() != dist.values.cols() ||
        dist.values.rows() != static_cast<Eigen::Index>(dist.labels.size())) {
        throw ValidationError("distance JSON dimensions do not match labels");
    }
    return dist;
}

nlohmann::json spectral_to_json(const SpectralSummary& summary) {
    nlohmann::json classification = nlohmann::json::array();
    for (const auto c : summary.classification) {
        classification.push_back(noise_class_name(c));
    }
    nlohmann::json eigenvectors = nlohmann::json::array();
    for (Eigen::Index k = 0; k < summary.eigenvectors.cols(); ++k) {
        eigenvectors.push_back(vector_to_json(summary.eigenvectors.col(k)));
    }
    return nlohmann::json{{"labels", label_strings(summary.labels)},
                          {"eigenvalues", vector_to_json(summary.eigenvalues)},
                          {"classification", std::move(classification)},
                          {"eigenvectors", std::move(eigenvectors)}};
}

nlohmann::json null_to_json(const NullEnsemble& ensemble) {
    return nlohmann::json{{"n_sims", ensemble.n_sims},
                          {"seed", ensemble.seed},
                          {"method", method_name(ensemble.method)},
                          {"envelope_min", vector_to_json(ensemble.envelope_min)},
                          {"envelope_max", vector_to_json(ensemble.envelope_max)},
                          {"global_min", ensemble.global_min()},
                          {"global_max", ensemble.global_max()},
                          {"mp_lower", ensemble.mp_lower},
                          {"mp_upper", ensemble.mp_upper}};
}

NullEnsemble null_from_json(const nlohmann::json& j) {
    NullEnsemble ensemble;
    ensemble.n_sims = j.at("n_sims").get<int>();
    ensemble.seed = j.at("seed").get<std::uint64_t>();
    ensemble.method = parse_method(j.at("method").get<std::string>());
    const auto vector_from = [](const nlohmann::json& arr) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            v[i] = arr.at(static_cast<std::size_t>(i)).get<double>();
        }
        return v;
    };
    ensemble.envelope_min = vector_from(j.at("envelope_min"));
    ensemble.envelope_max = vector_from(j.at("envelope_max"));
    ensemble.mp_lower = j.at("mp_lower").get<double>();
    ensemble.mp_upper = j.at("mp_upper").get<double>();
    if (ensemble.envelope_min.size() != ensemble.envelope_max.size()) {
        throw ValidationError("null ensemble envelopes differ in length");
    }
    return ensemble;
}

nlohmann::json graph_to_json(const AssetGraph& graph) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& edge : graph.edges) {
        edges.push_back(nlohmann::json{
            {"a", graph.nodes[static_cast<std::size_t>(edge.a)].str()},
            {"b", graph.nodes[static_cast<std::size_t>(edge.b)].str()},
            {"distance", edge.distance}});
    }
    return nlohmann::json{{"threshold", graph.threshold},
                          {"nodes", label_strings(graph.nodes)},
                          {"edges", std::move(edges)}};
}

AssetGraph graph_from_json(const nlohmann::json& j) {
    AssetGraph graph;
    graph.threshold = j.at("threshold").get<double>();
    graph.nodes = labels_from_json(j.at("nodes"));
    std::vector<std::string> names = label_strings(graph.nodes);
    for (const auto& edge : j.at("edges")) {
        const std::string a = edge.at("a").get<std::string>();
        const std::string b = edge.at("b").get<std::string>();
        const auto find = [&](const std::string& name) -> Eigen::Index {
            const auto it = std::find(names.begin(), names.end(), name);
            if (it == names.end()) {
                throw ValidationError("edge endpoint '" + name + "' not among graph nodes");
            }
            return static_cast<Eigen::Index>(it - names.begin());
        };
        graph.edges.push_back(GraphEdge{find(a), find(b), edge.at("distance").get<double>()});
    }
    return graph;
}

nlohmann::json centrality_to_json(const CentralityReport& report) {
    return nlohmann::json{
        {"nodes", label_strings(report.nodes)},
        {"degree", report.degree},
        {"eigenvector", vector_to_json(report.eigenvector)},
        {"betweenness", report.betweenness},
        {"rankings",
         nlohmann::json{{"degree", label_strings(report.degree_ranking)},
                        {"eigenvector", label_strings(report.eigenvector_ranking)},
                        {"betweenness", label_strings(report.betweenness_ranking)}}}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open '" + path.string() + "'");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("invalid JSON in '" + path.string() + "': " + e.what());
    }
}

void write_lag_profiles_csv(const std::filesystem::path& path,
                            const std::vector<LagProfile>& profiles) {
    auto out = open_out(path);
    out << "reference,target,lag,correlation\n";
    for (const auto& profile : profiles) {
        for (std::size_t k = 0; k < profile.lags.size(); ++k) {
            out << profile.reference.str() << ',' << profile.target.str() << ','
                << profile.lags[k] << ',' << format_double(profile.correlations[k]) << '\n';
        }
    }
}

void write_embedding_csv(const std::filesystem::path& path, const Embedding& embedding) {
    auto out = open_out(path);
    out << "label";
    for (Eigen::Index k = 0; k < embedding.coordinates.cols(); ++k) {
        out << ",x" << k + 1;
    }
    out << '\n';
    for (Eigen::Index i = 0; i < embedding.coordinates.rows(); ++i) {
        out << embedding.labels[static_cast<std::size_t>(i)].str();
        for (Eigen::Index k = 0; k < embedding.coordinates.cols(); ++k) {
            out << ',' << format_double(embedding.coordinates(i, k));
        }
        out << '\n';
    }
}

void write_graph_edges_csv(const std::filesystem::path& path, const AssetGraph& graph) {
    auto out = open_out(path);
    out << "label_a,label_b,distance\n";
    for (const auto& edge : graph.edges) {
        out << graph.nodes[static_cast<std::size_t>(edge.a)].str() << ','
            << graph.nodes[static_cast<std::size_t>(edge.b)].str() << ','
            << format_double(edge.distance) << '\n';
    }
}

void write_histogram_csv(const std::filesystem::path& path, const std::vector<double>& values,
                         int bins, double q) {
    if (values.empty() || bins < 1) {
        throw ValidationError("histogram needs values and at least 1 bin");
    }
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    if (q > 1.0) {
        const auto [mp_lo, mp_hi] = marchenko_pastur_bounds(q);
        lo = std::min(lo, mp_lo);
        hi = std::max(hi, mp_hi);
    }
    if (hi == lo) {
        hi = lo + 1.0; // degenerate spectrum: one nonempty bin
    }
    const double width = (hi - lo) / bins;
    std::vector<long> counts(static_cast<std::size_t>(bins), 0);
    for (const double v : values) {
        auto k = static_cast<std::ptrdiff_t>((v - lo) / width);
        k = std::clamp<std::ptrdiff_t>(k, 0, bins - 1);
        ++counts[static_cast<std::size_t>(k)];
    }
    auto out = open_out(path);
    out << "bin_lo,bin_hi,count,mp_density\n";
    for (int k = 0; k < bins; ++k) {
        const double a = lo + k * width;
        const double b = lo + (k + 1) * width;
        const double mid = 0.5 * (a + b);
        const double density = q > 1.0 ? marchenko_pastur_density(q, mid) : 0.0;
        out << format_double(a) << ',' << format_double(b) << ',' << counts[static_cast<std::size_t>(k)]
            << ',' << format_double(density) << '\n';
    }
}

void write_mp_curve_csv(const std::filesystem::path& path, double q, int points) {
    if (points < 2) {
        throw ValidationError("curve needs at least 2 points");
    }
    if (q <= 1.0) {
        throw ValidationError("curve requires aspect ratio > 1");
    }
    const auto [lo, hi] = marchenko_pastur_bounds(q);
    auto out = open_out(path);
    out << "lambda,density\n";
    for (int k = 0; k < points; ++k) {
        const double x = lo + (hi - lo) * k / (points - 1);
        out << format_double(x) << ',' << format_double(marchenko_pastur_density(q, x)) << '\n';
    }
}

} // namespace lagnet::io
