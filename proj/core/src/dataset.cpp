#include "rffmd/dataset.hpp"

#include <fstream>
#include <map>

#include <fmt/core.h>
#include <fmt/ranges.h>

#include "rffmd/csv.hpp"
#include "rffmd/errors.hpp"

namespace rffmd {

Dataset::Dataset(Eigen::MatrixXd points, Eigen::VectorXd values, Eigen::MatrixXd grads,
                 DatasetMeta meta)
    : points_(std::move(points)), values_(std::move(values)), grads_(std::move(grads)),
      meta_(std::move(meta)) {
    if (points_.rows() < 1 || points_.cols() < 1) throw InvalidArgument("Dataset: empty");
    if (values_.size() != points_.rows() || grads_.rows() != points_.rows() ||
        grads_.cols() != points_.cols())
        throw InvalidArgument("Dataset: inconsistent shapes");
    if (!points_.allFinite() || !values_.allFinite() || !grads_.allFinite())
        throw InvalidArgument("Dataset: non-finite entry");
}

std::filesystem::path meta_path(const std::filesystem::path& csv_path) {
    return std::filesystem::path(csv_path.string() + ".meta");
}

namespace {

std::string join_exact(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += format_exact(xs[i]);
    }
    return out;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    if (trim(s).empty()) return out;
    for (const auto& tok : split(s, ',')) out.push_back(parse_double(tok));
    return out;
}

} // namespace

void save_dataset(const std::filesystem::path& path, const Dataset& data) {
    const Eigen::Index d = data.dim();
    std::vector<std::string> header;
    for (Eigen::Index a = 0; a < d; ++a) header.push_back(fmt::format("x{}", a + 1));
    header.emplace_back("v");
    for (Eigen::Index a = 0; a < d; ++a) header.push_back(fmt::format("dvdx{}", a + 1));

    {
        CsvWriter w(path, header);
        for (Eigen::Index j = 0; j < data.size(); ++j) {
            for (Eigen::Index a = 0; a < d; ++a) w.field(data.points()(j, a));
            w.field(data.values()[j]);
            for (Eigen::Index a = 0; a < d; ++a) w.field(data.grads()(j, a));
            w.end_row();
        }
    }

    std::ofstream meta(meta_path(path));
    if (!meta) throw Error("cannot write " + meta_path(path).string());
    const DatasetMeta& m = data.meta();
    meta << "seed=" << m.seed << '\n'
         << "betas=" << join_exact(m.betas) << '\n'
         << "fractions=" << join_exact(m.fractions) << '\n'
         << "dt=" << format_exact(m.dt) << '\n'
         << "burn_in=" << m.burn_in << '\n'
         << "thinning=" << m.thinning << '\n'
         << "J=" << data.size() << '\n';
}

Dataset load_dataset(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t ncol = t.header.size();
    if (ncol < 3 || ncol % 2 == 0) throw ParseError(path.string() + ": unexpected column count");
    const std::size_t d = (ncol - 1) / 2;
    const Eigen::Index J = static_cast<Eigen::Index>(t.rows.size());
    if (J == 0) throw ParseError(path.string() + ": no rows");

    Eigen::MatrixXd x(J, d), g(J, d);
    Eigen::VectorXd v(J);
    for (Eigen::Index j = 0; j < J; ++j) {
        const auto& row = t.rows[j];
        if (row.size() != ncol) throw ParseError(fmt::format("{}: row {} has wrong width", path.string(), j + 1));
        for (std::size_t a = 0; a < d; ++a) x(j, a) = parse_double(row[a]);
        v[j] = parse_double(row[d]);
        for (std::size_t a = 0; a < d; ++a) g(j, a) = parse_double(row[d + 1 + a]);
    }

    DatasetMeta meta;
    std::ifstream in(meta_path(path));
    if (in) {
        std::map<std::string, std::string> kv;
        std::string line;
        while (std::getline(in, line)) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
        if (kv.count("seed")) meta.seed = std::stoull(kv["seed"]);
        if (kv.count("betas")) meta.betas = parse_list(kv["betas"]);
        if (kv.count("fractions")) meta.fractions = parse_list(kv["fractions"]);
        if (kv.count("dt")) meta.dt = parse_double(kv["dt"]);
        if (kv.count("burn_in")) meta.burn_in = static_cast<long>(parse_int(kv["burn_in"]));
        if (kv.count("thinning")) meta.thinning = static_cast<long>(parse_int(kv["thinning"]));
    }
    return Dataset(std::move(x), std::move(v), std::move(g), std::move(meta));
}

} // namespace rffmd
