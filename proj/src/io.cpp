#include "rcar/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rcar {

namespace {

std::string sidecar_path(const std::string& csv_path) {
    if (csv_path.size() >= 4 && csv_path.substr(csv_path.size() - 4) == ".csv")
        return csv_path.substr(0, csv_path.size() - 4) + ".json";
    return csv_path + ".json";
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

nlohmann::json mixing_to_json(const MixingLaw& m) {
    nlohmann::json j;
    if (m.kind == MixingLaw::Kind::BetaSquared) {
        j["kind"] = "beta_squared";
        j["alpha"] = m.alpha;
        j["beta"] = m.beta;
    } else {
        j["kind"] = "degenerate";
        j["a0"] = m.a0;
    }
    return j;
}

MixingLaw mixing_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "beta_squared")
        return MixingLaw::beta_squared(j.at("alpha").get<double>(), j.at("beta").get<double>());
    if (kind == "degenerate") return MixingLaw::degenerate(j.at("a0").get<double>());
    throw std::invalid_argument("mixing_from_json: unknown kind " + kind);
}

nlohmann::json innovation_to_json(const InnovationLaw& l) {
    nlohmann::json j;
    switch (l.kind) {
        case InnovationLaw::Kind::Gaussian: j["kind"] = "gaussian"; break;
        case InnovationLaw::Kind::StudentT:
            j["kind"] = "student_t";
            j["dof"] = l.dof;
            break;
        case InnovationLaw::Kind::Rademacher: j["kind"] = "rademacher"; break;
    }
    return j;
}

InnovationLaw innovation_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "gaussian") return InnovationLaw::gaussian();
    if (kind == "student_t") return InnovationLaw::student_t(j.at("dof").get<double>());
    if (kind == "rademacher") return InnovationLaw::rademacher();
    throw std::invalid_argument("innovation_from_json: unknown kind " + kind);
}

void write_panel(const Panel& panel, const std::string& path_prefix) {
    const std::string csv = path_prefix + ".csv";
    std::FILE* f = std::fopen(csv.c_str(), "w");
    if (!f) throw std::runtime_error("write_panel: cannot open " + csv);
    std::fputs("row,col,value\n", f);
    for (std::int64_t i = 0; i < panel.n_rows; ++i)
        for (std::int64_t k = 0; k < panel.n_cols; ++k)
            std::fprintf(f, "%lld,%lld,%.17g\n", static_cast<long long>(i),
                         static_cast<long long>(k), panel.values[i * panel.n_cols + k]);
    std::fclose(f);

    nlohmann::json j;
    j["version"] = kFormatVersion;
    j["seed"] = panel.seed;
    j["N"] = panel.n_rows;
    j["n"] = panel.n_cols;
    j["mixing"] = mixing_to_json(panel.mixing);
    j["innovation"] = innovation_to_json(panel.innovation);
    j["coefficients"] = panel.coefficients;
    write_text(path_prefix + ".json", j.dump(2) + "\n");
}

Panel read_panel(const std::string& csv_path) {
    std::ifstream meta(sidecar_path(csv_path));
    if (!meta) throw std::runtime_error("read_panel: missing sidecar " + sidecar_path(csv_path));
    nlohmann::json j;
    meta >> j;
    Panel p;
    p.n_rows = j.at("N").get<std::int64_t>();
    p.n_cols = j.at("n").get<std::int64_t>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.mixing = mixing_from_json(j.at("mixing"));
    p.innovation = innovation_from_json(j.at("innovation"));
    p.coefficients = j.at("coefficients").get<std::vector<double>>();
    p.values.assign(static_cast<std::size_t>(p.n_rows) * p.n_cols, 0.0);

    std::ifstream f(csv_path);
    if (!f) throw std::runtime_error("read_panel: cannot open " + csv_path);
    std::string line;
    std::getline(f, line);  // header
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw std::runtime_error("read_panel: malformed line '" + line + "'");
        const std::int64_t row = std::stoll(line.substr(0, c1));
        const std::int64_t col = std::stoll(line.substr(c1 + 1, c2 - c1 - 1));
        if (row < 0 || row >= p.n_rows || col < 0 || col >= p.n_cols)
            throw std::runtime_error("read_panel: index out of range in '" + line + "'");
        p.values[row * p.n_cols + col] = std::stod(line.substr(c2 + 1));
    }
    return p;
}

void write_samples_csv(const std::string& path, const std::vector<double>& samples) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("write_samples_csv: cannot open " + path);
    for (double v : samples) std::fprintf(f, "%.17g\n", v);
    std::fclose(f);
}

void write_kde_csv(const std::string& path, const std::vector<double>& grid,
                   const std::vector<double>& kde, const std::vector<double>& reference) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("write_kde_csv: cannot open " + path);
    const bool with_ref = reference.size() == grid.size();
    std::fputs(with_ref ? "x,kde,limit_density\n" : "x,kde\n", f);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (with_ref)
            std::fprintf(f, "%.17g,%.17g,%.17g\n", grid[i], kde[i], reference[i]);
        else
            std::fprintf(f, "%.17g,%.17g\n", grid[i], kde[i]);
    }
    std::fclose(f);
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_text: cannot open " + path);
    f << content;
}

void write_svg_plot(const std::string& path, const std::vector<double>& x,
                    const std::vector<std::vector<double>>& series,
                    const std::vector<std::string>& labels) {
    if (x.empty() || series.empty()) throw std::invalid_argument("write_svg_plot: empty data");
    const int W = 720, H = 440, ml = 60, mr = 20, mt = 20, mb = 40;
    double y_min = 0.0, y_max = -1e300;
    for (const auto& s : series)
        for (double v : s) {
            y_max = std::max(y_max, v);
            y_min = std::min(y_min, v);
        }
    if (!(y_max > y_min)) y_max = y_min + 1.0;
    const double x_min = x.front(), x_max = x.back();
    auto px = [&](double v) { return ml + (v - x_min) / (x_max - x_min) * (W - ml - mr); };
    auto py = [&](double v) { return H - mb - (v - y_min) / (y_max - y_min) * (H - mt - mb); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";
    svg << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='" << H - mb
        << "' stroke='black'/>\n";
    svg << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb
        << "' stroke='black'/>\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", x_min);
    svg << "<text x='" << ml << "' y='" << H - mb + 18 << "' font-size='12'>" << buf
        << "</text>\n";
    std::snprintf(buf, sizeof buf, "%.4g", x_max);
    svg << "<text x='" << W - mr - 40 << "' y='" << H - mb + 18 << "' font-size='12'>" << buf
        << "</text>\n";
    std::snprintf(buf, sizeof buf, "%.4g", y_max);
    svg << "<text x='4' y='" << mt + 10 << "' font-size='12'>" << buf << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        svg << "<polyline fill='none' stroke='" << colors[s % 4] << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < x.size() && i < series[s].size(); ++i)
            svg << px(x[i]) << "," << py(series[s][i]) << " ";
        svg << "'/>\n";
        if (s < labels.size())
            svg << "<text x='" << W - mr - 150 << "' y='" << mt + 16 + 16 * s
                << "' font-size='12' fill='" << colors[s % 4] << "'>" << labels[s] << "</text>\n";
    }
    svg << "</svg>\n";
    write_text(path, svg.str());
}

std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_config: cannot open " + path);
    std::map<std::string, std::string> out;
    std::string line, section;
    while (std::getline(f, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("read_config: expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        out[section.empty() ? key : section + "." + key] = value;
    }
    return out;
}

}  // namespace rcar
