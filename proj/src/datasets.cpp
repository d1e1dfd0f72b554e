#include "driftbench/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <openssl/evp.h>

namespace driftbench {

const std::vector<DatasetDescriptor>& benchmark_datasets() {
    static const std::vector<DatasetDescriptor> table = {
        {"EL", 2, 8, 45312, 60, 50, ""},
        {"FC", 8, 54, 581012, 60, 5000, ""},
        {"IA", 6, 33, 52848, 60, 500, ""},
        {"II", 6, 33, 57018, 60, 500, ""},
        {"KS", 4, 10, 1600, 60, 50, ""},
        {"LX", 2, 30, 1901, 32, 50, ""},
        {"MR", 2, 3600, 4260, 60, 50, ""},
        {"NW", 2, 8, 18159, 120, 50, ""},
        {"OZ", 2, 72, 2534, 84, 50, ""},
        {"RT", 10, 27, 82250, 60, 50, ""},
        {"YG", 2, 426, 3300, 60, 50, ""},
    };
    return table;
}

const DatasetDescriptor* find_dataset(std::string_view id) {
    for (const auto& d : benchmark_datasets()) {
        if (d.id == id) return &d;
    }
    return nullptr;
}

namespace {

std::vector<std::string> split_fields(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(delim, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && ptr == e;
}

char detect_delimiter(const std::string& line) {
    const auto commas = std::count(line.begin(), line.end(), ',');
    const auto semis = std::count(line.begin(), line.end(), ';');
    const auto tabs = std::count(line.begin(), line.end(), '\t');
    if (semis > commas && semis >= tabs) return ';';
    if (tabs > commas && tabs > semis) return '\t';
    return ',';
}

bool is_missing(const std::string& s) { return s.empty() || s == "?"; }

}  // namespace

LoadResult load_stream(const std::string& path, const LoadOptions& opts) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open stream file: " + path);

    LoadResult res;
    std::unordered_map<std::string, int> label_ids;
    for (const auto& l : opts.declared_labels) {
        label_ids.emplace(l, static_cast<int>(res.schema.class_labels.size()));
        res.schema.class_labels.push_back(l);
    }

    std::string line;
    char delim = opts.delimiter;
    std::size_t row = 0;
    std::int64_t t = 0;
    int n_fields = -1;
    int label_col = -1;
    bool saw_data = false;

    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (delim == '\0') delim = detect_delimiter(line);

        auto fields = split_fields(line, delim);
        for (auto& f : fields) f = trim(f);

        if (n_fields < 0) {
            n_fields = static_cast<int>(fields.size());
            if (n_fields < 2) {
                throw ParseError(path + ": row " + std::to_string(row) +
                                 ": need at least one feature and a label column");
            }
            label_col = opts.label_column < 0 ? n_fields - 1 : opts.label_column;
            if (label_col >= n_fields) {
                throw ConfigError(path + ": label column " + std::to_string(label_col) +
                                  " out of range for " + std::to_string(n_fields) + " columns");
            }
        } else if (static_cast<int>(fields.size()) != n_fields) {
            throw ParseError(path + ": row " + std::to_string(row) + ": expected " +
                             std::to_string(n_fields) + " fields, got " +
                             std::to_string(fields.size()));
        }

        // Header detection: the first row is a header iff any feature field
        // fails numeric parsing.
        if (!saw_data) {
            bool header = false;
            double tmp;
            for (int c = 0; c < n_fields; ++c) {
                if (c == label_col) continue;
                if (!parse_double(fields[c], tmp)) { header = true; break; }
            }
            if (header) {
                for (int c = 0; c < n_fields; ++c) {
                    if (c == label_col) continue;
                    res.schema.feature_names.push_back(fields[c]);
                }
                saw_data = true;
                continue;
            }
            saw_data = true;
        }

        Instance inst;
        inst.t = t++;
        inst.x.resize(n_fields - 1);
        int xi = 0;
        for (int c = 0; c < n_fields; ++c) {
            if (c == label_col) continue;
            if (is_missing(fields[c])) {
                throw ParseError(path + ": row " + std::to_string(row) +
                                 ": missing feature value in column " + std::to_string(c));
            }
            double v;
            if (!parse_double(fields[c], v)) {
                throw ParseError(path + ": row " + std::to_string(row) +
                                 ": non-numeric feature '" + fields[c] + "' in column " +
                                 std::to_string(c));
            }
            inst.x[xi++] = v;
        }

        const std::string& raw_label = fields[label_col];
        if (is_missing(raw_label)) {
            throw ParseError(path + ": row " + std::to_string(row) + ": missing label");
        }
        auto it = label_ids.find(raw_label);
        if (it == label_ids.end()) {
            if (!opts.declared_labels.empty()) {
                throw ParseError(path + ": row " + std::to_string(row) + ": label '" +
                                 raw_label + "' not in declared label set");
            }
            it = label_ids.emplace(raw_label, static_cast<int>(res.schema.class_labels.size())).first;
            res.schema.class_labels.push_back(raw_label);
        }
        inst.y = it->second;
        res.stream.push_back(std::move(inst));
    }

    if (res.schema.feature_names.empty() && n_fields > 0) {
        for (int c = 0; c < n_fields - 1; ++c) {
            res.schema.feature_names.push_back("f" + std::to_string(c));
        }
    }
    return res;
}

LoadResult load_dataset(const std::string& path, const DatasetDescriptor& desc,
                        const LoadOptions& opts) {
    LoadResult res = load_stream(path, opts);
    auto fail = [&](const std::string& what, std::int64_t expected, std::int64_t actual) {
        throw IntegrityError(desc.id + " (" + path + "): " + what + " mismatch: expected " +
                             std::to_string(expected) + ", got " + std::to_string(actual));
    };
    if (static_cast<std::int64_t>(res.stream.size()) != desc.n_samples) {
        fail("instance count", desc.n_samples, static_cast<std::int64_t>(res.stream.size()));
    }
    if (res.schema.n_features() != desc.n_features) {
        fail("feature count", desc.n_features, res.schema.n_features());
    }
    if (res.schema.n_classes() != desc.n_classes) {
        fail("class count", desc.n_classes, res.schema.n_classes());
    }
    return res;
}

void SyntheticDriftConfig::validate() const {
    if (n_steps < 1) throw ConfigError("SyntheticDriftConfig: n_steps must be >= 1");
    if (step_period < 1) throw ConfigError("SyntheticDriftConfig: step_period must be >= 1");
    if (!(sigma > 0.0)) throw ConfigError("SyntheticDriftConfig: sigma must be > 0");
}

double drift_mu_at(const SyntheticDriftConfig& cfg, std::int64_t t) {
    if (cfg.drift_kind == DriftKind::Stationary) return 0.0;
    if (cfg.mu_schedule == MuSchedule::Ramp) {
        // Linear interpolation between the step schedule's update points.
        return static_cast<double>(t) / 10.0;
    }
    return std::floor(static_cast<double>(t) / cfg.step_period) * (cfg.step_period / 10.0);
}

Stream gaussian_drift_stream(const SyntheticDriftConfig& cfg) {
    cfg.validate();
    if (cfg.drift_kind == DriftKind::AbruptClassSwap) {
        throw InputError("gaussian_drift_stream: use abrupt_class_stream for class swaps");
    }
    Rng rng(cfg.seed);
    Stream out;
    out.reserve(cfg.n_steps);
    for (int t = 0; t < cfg.n_steps; ++t) {
        Instance inst;
        inst.t = t;
        inst.x.resize(1);
        inst.x[0] = rng.normal(drift_mu_at(cfg, t), cfg.sigma);
        out.push_back(std::move(inst));
    }
    return out;
}

StreamSchema gaussian_drift_schema() {
    return StreamSchema{{"x"}, {}};
}

Stream abrupt_class_stream(int n_steps, int switch_t, std::uint64_t seed) {
    if (!(0 < switch_t && switch_t < n_steps)) {
        throw InputError("abrupt_class_stream: require 0 < switch_t < n_steps");
    }
    Rng rng(seed);
    Stream out;
    out.reserve(n_steps);
    for (int t = 0; t < n_steps; ++t) {
        const int y = t % 2;
        const bool swapped = t >= switch_t;
        const double base = (y == 0) == !swapped ? 0.0 : 3.0;
        Instance inst;
        inst.t = t;
        inst.x.resize(2);
        inst.x[0] = rng.normal(base, 1.0);
        inst.x[1] = rng.normal(base, 1.0);
        inst.y = y;
        out.push_back(std::move(inst));
    }
    return out;
}

StreamSchema abrupt_class_schema() {
    return StreamSchema{{"f0", "f1"}, {"0", "1"}};
}

std::vector<ManifestEntry> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path);
    std::vector<ManifestEntry> entries;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream ss(t);
        ManifestEntry e;
        std::string label_col;
        if (!(ss >> e.id >> e.url >> e.sha256 >> label_col)) {
            throw ParseError(path + ": line " + std::to_string(row) +
                             ": expected `id url sha256 label_column [filename]`");
        }
        if (label_col == "last") {
            e.label_column = -1;
        } else {
            int v;
            auto [p, ec] = std::from_chars(label_col.data(), label_col.data() + label_col.size(), v);
            if (ec != std::errc() || p != label_col.data() + label_col.size()) {
                throw ParseError(path + ": line " + std::to_string(row) +
                                 ": bad label_column '" + label_col + "'");
            }
            e.label_column = v;
        }
        if (!(ss >> e.filename)) e.filename = e.id + ".csv";
        entries.push_back(std::move(e));
    }
    return entries;
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file for hashing: " + path);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw Error("EVP_MD_CTX_new failed");
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in.good()) {
        in.read(buf, sizeof(buf));
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

}  // namespace driftbench
