// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "mariner/io.hpp"

#include "mariner/common.hpp"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace mariner::io {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

std::string join(const std::vector<std::string>& parts)
{
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i)
        s += (i ? "," : "") + parts[i];
    return s;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in)
{
    std::ifstream in(path, mode);
    if (!in)
        throw IoError("cannot read " + path.string());
    return in;
}

template <class T>
void put_le(std::ostream& out, T v)
{
    static_assert(std::endian::native == std::endian::little, "MCIQ1 I/O assumes a little-endian host");
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get_le(std::istream& in, const std::filesystem::path& path)
{
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
        throw DomainError("truncated IQ file " + path.string());
    return v;
}

constexpr std::array<char, 8> kIqMagic = {'M', 'C', 'I', 'Q', '1', 0, 0, 0};

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view text)
{
    text = trim(text);
    if (text == "inf" || text == "+inf")
        return kInf;
    if (text == "-inf")
        return -kInf;
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw DomainError("not a number: '" + std::string(text) + "'");
    return v;
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path& path, const std::vector<std::string>& header)
{
    std::ifstream in = open_in(path);
    std::string line;
    bool have_header = false;
    std::vector<std::vector<double>> cols(header.size());
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto fields = split_commas(line);
        if (!have_header) {
            std::vector<std::string> got(fields.begin(), fields.end());
            if (got != header)
                throw DomainError(path.string() + ": expected header '" + join(header) + "', found '" +
                                  std::string(trim(line)) + "'");
            have_header = true;
            continue;
        }
        if (fields.size() != header.size())
            throw DomainError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " fields");
        for (std::size_t c = 0; c < fields.size(); ++c) {
            try {
                cols[c].push_back(parse_double(fields[c]));
            } catch (const DomainError& e) {
                throw DomainError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
            }
        }
    }
    if (!have_header)
        throw DomainError(path.string() + ": missing header '" + join(header) + "'");
    return cols;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns)
{
    require(columns.size() == header.size(), "CSV column count does not match the header");
    for (const auto& c : columns)
        require(c.size() == columns.front().size(), "CSV columns differ in length");
    std::ostringstream os;
    os << join(header) << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c)
            os << (c ? "," : "") << format_double(columns[c][r]);
        os << '\n';
    }
    write_text(path, os.str());
}

std::vector<PathLossSample> read_pathloss_csv(const std::filesystem::path& path)
{
    const auto cols = read_csv(path, {"d_m", "pl_db"});
    std::vector<PathLossSample> out(cols[0].size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = {cols[0][i], cols[1][i]};
    return out;
}

void write_pathloss_csv(const std::filesystem::path& path, std::span<const double> d_m, std::span<const double> pl_db)
{
    write_csv(path, {"d_m", "pl_db"}, {{d_m.begin(), d_m.end()}, {pl_db.begin(), pl_db.end()}});
}

PdpRecord read_pdp_csv(const std::filesystem::path& path)
{
    const auto cols = read_csv(path, {"delay_ns", "power_linear"});
    PdpRecord p;
    p.delays.reserve(cols[0].size());
    for (double ns : cols[0])
        p.delays.push_back(ns * 1e-9);
    p.powers = cols[1];
    p.validate();
    return p;
}

void write_pdp_csv(const std::filesystem::path& path, const PdpRecord& p)
{
    std::vector<double> ns;
    ns.reserve(p.delays.size());
    for (double s : p.delays)
        ns.push_back(s * 1e9);
    write_csv(path, {"delay_ns", "power_linear"}, {ns, p.powers});
}

std::vector<double> read_envelope_csv(const std::filesystem::path& path)
{
    return read_csv(path, {"amplitude"})[0];
}

void write_envelope_csv(const std::filesystem::path& path, std::span<const double> amplitude)
{
    write_csv(path, {"amplitude"}, {{amplitude.begin(), amplitude.end()}});
}

void write_swift_csv(const std::filesystem::path& path, std::span<const double> t_s, std::span<const double> fading_db)
{
    write_csv(path, {"t_s", "fading_db"}, {{t_s.begin(), t_s.end()}, {fading_db.begin(), fading_db.end()}});
}

std::pair<std::vector<double>, std::vector<double>> read_swift_csv(const std::filesystem::path& path)
{
    auto cols = read_csv(path, {"t_s", "fading_db"});
    return {std::move(cols[0]), std::move(cols[1])};
}

void write_histogram_csv(const std::filesystem::path& path, const Histogram& h)
{
    write_csv(path, {"bin_center_db", "density"}, {h.centers, h.density});
}

void write_iq(const std::filesystem::path& path, std::span<const cplx> samples)
{
    std::ofstream out = open_out(path, std::ios::out | std::ios::binary);
    out.write(kIqMagic.data(), kIqMagic.size());
    put_le<std::uint64_t>(out, samples.size());
    for (const cplx& s : samples) {
        put_le<double>(out, s.real());
        put_le<double>(out, s.imag());
    }
    if (!out)
        throw IoError("failed writing " + path.string());
}

std::vector<cplx> read_iq(const std::filesystem::path& path)
{
    std::ifstream in = open_in(path, std::ios::in | std::ios::binary);
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kIqMagic)
        throw DomainError(path.string() + " is not an MCIQ1 file");
    const auto count = get_le<std::uint64_t>(in, path);
    const auto bytes = std::filesystem::file_size(path);
    if (bytes != kIqMagic.size() + sizeof(std::uint64_t) + count * 16)
        throw DomainError(path.string() + ": size does not match the sample count");
    std::vector<cplx> out(count);
    for (auto& s : out) {
        const double re = get_le<double>(in, path);
        const double im = get_le<double>(in, path);
        s = {re, im};
    }
    return out;
}

std::string sha256_hex(std::string_view bytes)
{
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i)
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in = open_in(path, std::ios::in | std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out = open_out(path, std::ios::out | std::ios::binary);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw IoError("failed writing " + path.string());
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_text(path)); }

json to_json(const ThresholdDistances& t)
{
    return {{"d_break_m", t.d_break}, {"d_06f_m", t.d_06f}, {"d_los_m", t.d_los_vision}};
}

json to_json(const HarmonicSet& h)
{
    json waves = json::array();
    for (const Harmonic& w : h.waves)
        waves.push_back({{"amplitude_m", w.amplitude},
                         {"omega_rad_s", w.omega},
                         {"period_s", w.period},
                         {"wavelength_m", w.wavelength},
                         {"phase_rad", w.phase}});
    return {{"harmonics", waves}};
}

json to_json(const FadingModel& m)
{
    json j;
    j["family"] = family_name(family_of(m));
    std::visit(
        [&j](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Rician>) {
                j["s"] = p.s;
                j["sigma"] = p.sigma;
                j["k_db"] = rician_k_db(p.s, p.sigma);
            } else if constexpr (std::is_same_v<T, Twdp>) {
                j["k"] = p.k;
                j["delta"] = p.delta;
                j["sigma"] = p.sigma;
            } else if constexpr (std::is_same_v<T, Nakagami>) {
                j["m"] = p.m;
                j["omega"] = p.omega;
            } else if constexpr (std::is_same_v<T, Lognormal>) {
                j["mu"] = p.mu;
                j["sigma"] = p.sigma;
            } else if constexpr (std::is_same_v<T, Laplace>) {
                j["mu"] = p.mu;
                j["b"] = p.b;
            } else {
                j["mu"] = p.mu;
                j["b1"] = p.b1;
                j["b2"] = p.b2;
            }
        },
        m);
    return j;
}

FadingModel fading_model_from_json(const json& j)
{
    require(j.is_object() && j.contains("family"), "fading model needs a 'family' field");
    const FadingFamily fam = parse_family(j.at("family").get<std::string>());
    auto get = [&j](const char* key, double fallback) { return j.contains(key) ? j.at(key).get<double>() : fallback; };
    FadingModel m;
    switch (fam) {
    case FadingFamily::Rician: m = Rician{get("s", Rician{}.s), get("sigma", Rician{}.sigma)}; break;
    case FadingFamily::Twdp: m = Twdp{get("k", Twdp{}.k), get("delta", Twdp{}.delta), get("sigma", Twdp{}.sigma)}; break;
    case FadingFamily::Nakagami: m = Nakagami{get("m", Nakagami{}.m), get("omega", Nakagami{}.omega)}; break;
    case FadingFamily::Lognormal: m = Lognormal{get("mu", Lognormal{}.mu), get("sigma", Lognormal{}.sigma)}; break;
    case FadingFamily::Laplace: m = Laplace{get("mu", Laplace{}.mu), get("b", Laplace{}.b)}; break;
    case FadingFamily::AsymLaplace:
        m = AsymLaplace{get("mu", AsymLaplace{}.mu), get("b1", AsymLaplace{}.b1), get("b2", AsymLaplace{}.b2)};
        break;
    }
    validate(m);
    return m;
}

json to_json(const FitReport& r)
{
    return {{"model", to_json(r.model)}, {"ks", r.ks},         {"pdf_rmse", r.pdf_rmse},
            {"loglik", r.loglik},        {"n", r.n},           {"histogram_bins", r.histogram_bins},
            {"converged", r.converged},  {"warnings", r.warnings}};
}

json to_json(const PlFitReport& r)
{
    json j;
    j["n_samples"] = r.n_samples;
    j["rmse_db"] = r.rmse_db;
    j["excluded_nulls"] = r.excluded_nulls;
    j["warnings"] = r.warnings;
    switch (r.kind) {
    case PlModelKind::Ci:
        j["model"] = "ci";
        j["n"] = r.ci.n;
        j["d0_m"] = r.ci.d0;
        j["sigma_sf_db"] = r.ci.sigma_sf;
        break;
    case PlModelKind::DualCi:
    case PlModelKind::DualCiMtr:
        j["model"] = r.kind == PlModelKind::DualCi ? "dual-ci" : "dual-ci-mtr";
        j["n1"] = r.dual.n1;
        j["n2"] = finite_or_null(r.dual.n2);
        j["d_break_m"] = r.dual.d_break;
        j["sigma_sf_db"] = r.dual.sigma_sf;
        j["single_segment"] = r.single_segment;
        break;
    }
    return j;
}

json to_json(const SparsityMetrics& m)
{
    return {{"gini", m.gini}, {"k_factor_db", finite_or_null(m.k_factor_db)}, {"k_infinite", m.k_infinite},
            {"n_mpc", m.n_mpc}};
}

json to_json(const LemmaCheckReport& r)
{
    return {{"trials", r.trials},
            {"equal_split_violations", r.equal_split_violations},
            {"random_split_violations", r.random_split_violations},
            {"coarsen_violations", r.coarsen_violations},
            {"max_equal_split_gap", r.max_equal_split_gap},
            {"min_random_split_margin", r.min_random_split_margin},
            {"passed", r.equal_split_violations == 0 && r.random_split_violations == 0 && r.coarsen_violations == 0}};
}

json to_json(const DelayStats& s)
{
    return {{"mean_excess_delay_ns", s.mean_excess_delay * 1e9}, {"rms_delay_spread_ns", s.rms_delay_spread * 1e9}};
}

json to_json(const ExpPdpFit& f)
{
    return {{"p0_bar", f.p0_bar},   {"gamma_ns", finite_or_null(f.gamma * 1e9)}, {"r2", f.r2},
            {"n_taps", f.n_taps}, {"flagged", f.flagged},                        {"warnings", f.warnings}};
}

} // namespace mariner::io
