#include "jrc/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "jrc/waveforms/zc.hpp"

namespace jrc::harness {

using nlohmann::json;

namespace {

const std::vector<std::pair<Scenario, std::string>>& scenario_table() {
    static const std::vector<std::pair<Scenario, std::string>> t = {
        {Scenario::papr, "papr"},
        {Scenario::root_design, "root-design-fig5"},
        {Scenario::false_alarm, "false-alarm-fig10"},
        {Scenario::ranging, "ranging-fig11"},
        {Scenario::velocity, "velocity-fig12"},
        {Scenario::tradeoff, "tradeoff-fig13-14"},
        {Scenario::xcorr, "xcorr-appendix"},
        {Scenario::loopback_ber, "loopback-ber"},
    };
    return t;
}

std::string join_errors(const std::vector<FieldError>& errors) {
    std::string s = "invalid config:";
    for (const auto& e : errors) s += " " + e.field + ": " + e.message + ";";
    return s;
}

/// Walks one JSON object, converting fields and recording every problem.
class Reader {
public:
    Reader(const json& obj, std::string path, std::vector<FieldError>& errors)
        : obj_(obj), path_(std::move(path)), errors_(errors) {
        if (!obj_.is_object()) fail("", "expected an object");
    }

    ~Reader() = default;

    /// Reports keys that no `get` call consumed.
    void finish() {
        if (!obj_.is_object()) return;
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!seen_.count(it.key())) fail(it.key(), "unknown key");
    }

    bool has(const std::string& key) const { return obj_.is_object() && obj_.contains(key); }

    template <class T>
    void get(const std::string& key, T& out) {
        seen_.insert(key);
        if (!has(key)) return;
        convert(obj_.at(key), key, out);
    }

    template <class T>
    void get(const std::string& key, std::optional<T>& out) {
        seen_.insert(key);
        if (!has(key) || obj_.at(key).is_null()) return;
        T v{};
        if (convert(obj_.at(key), key, v)) out = v;
    }

    template <class T>
    void get(const std::string& key, std::vector<T>& out) {
        seen_.insert(key);
        if (!has(key)) return;
        const json& a = obj_.at(key);
        if (!a.is_array()) {
            fail(key, "expected an array");
            return;
        }
        out.clear();
        for (std::size_t i = 0; i < a.size(); ++i) {
            T v{};
            if (convert(a[i], key + "[" + std::to_string(i) + "]", v)) out.push_back(v);
        }
    }

    const json* child(const std::string& key) {
        seen_.insert(key);
        return has(key) ? &obj_.at(key) : nullptr;
    }

    std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    void fail(const std::string& key, const std::string& msg) { errors_.push_back({path(key), msg}); }

private:
    bool convert(const json& j, const std::string& key, double& out) {
        if (!j.is_number()) return fail(key, "expected a number"), false;
        out = j.get<double>();
        return true;
    }
    bool convert(const json& j, const std::string& key, int& out) {
        if (!j.is_number_integer()) return fail(key, "expected an integer"), false;
        out = j.get<int>();
        return true;
    }
    bool convert(const json& j, const std::string& key, long long& out) {
        if (!j.is_number_integer()) return fail(key, "expected an integer"), false;
        out = j.get<long long>();
        return true;
    }
    bool convert(const json& j, const std::string& key, std::uint64_t& out) {
        if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<long long>() < 0))
            return fail(key, "expected a non-negative integer"), false;
        out = j.get<std::uint64_t>();
        return true;
    }
    bool convert(const json& j, const std::string& key, bool& out) {
        if (!j.is_boolean()) return fail(key, "expected true or false"), false;
        out = j.get<bool>();
        return true;
    }
    bool convert(const json& j, const std::string& key, std::string& out) {
        if (!j.is_string()) return fail(key, "expected a string"), false;
        out = j.get<std::string>();
        return true;
    }

    const json& obj_;
    std::string path_;
    std::vector<FieldError>& errors_;
    std::set<std::string> seen_;
};

void read_root(const json& j, const std::string& path, RootRule& out, std::vector<FieldError>& errors) {
    if (j.is_number_integer()) {
        out.kind = RootRule::Kind::value;
        out.value = j.get<long long>();
        return;
    }
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "designed") return void(out.kind = RootRule::Kind::designed);
        if (s == "(L-1)/2") return void(out.kind = RootRule::Kind::low);
        if (s == "(L+1)/2") return void(out.kind = RootRule::Kind::high);
    }
    errors.push_back({path, "expected an integer, \"designed\", \"(L-1)/2\" or \"(L+1)/2\""});
}

WaveformConfig read_waveform(const json& j, const std::string& path, std::vector<FieldError>& errors) {
    WaveformConfig w;
    Reader r(j, path, errors);
    r.get("kind", w.kind);
    r.get("label", w.label);
    r.get("sample_period_s", w.sample_period_s);
    r.get("subbands", w.subbands);
    r.get("subband_len", w.subband_len);
    r.get("guard_len", w.guard_len);
    if (const json* root = r.child("root")) read_root(*root, r.path("root"), w.root, errors);
    r.get("phase_search", w.phase_search);
    r.get("sampling", w.sampling);
    r.get("extension", w.extension);
    r.get("guard_len_ext", w.guard_len_ext);
    r.get("cp_len", w.cp_len);
    r.get("zc_len", w.zc_len);
    r.get("lfm_bandwidth_hz", w.lfm_bandwidth_hz);
    r.get("lfm_duration_s", w.lfm_duration_s);
    r.finish();
    if (w.label.empty()) w.label = w.kind;
    return w;
}

ExperimentConfig from_json(const json& doc) {
    std::vector<FieldError> errors;
    ExperimentConfig c;
    Reader top(doc, "", errors);
    if (!doc.is_object()) throw ConfigError(errors);

    if (!top.has("schema_version")) errors.push_back({"schema_version", "missing"});
    top.get("schema_version", c.schema_version);
    std::string scenario;
    if (!top.has("scenario")) errors.push_back({"scenario", "missing"});
    top.get("scenario", scenario);
    if (!scenario.empty()) {
        if (auto s = parse_scenario(scenario))
            c.scenario = *s;
        else
            errors.push_back({"scenario", "unknown scenario '" + scenario + "'"});
    }
    top.get("trials", c.trials);
    top.get("base_seed", c.base_seed);
    top.get("scale", c.scale);
    top.get("search_budget", c.search_budget);

    if (const json* ws = top.child("waveforms")) {
        if (!ws->is_array()) {
            errors.push_back({"waveforms", "expected an array"});
        } else {
            for (std::size_t i = 0; i < ws->size(); ++i)
                c.waveforms.push_back(read_waveform((*ws)[i], "waveforms[" + std::to_string(i) + "]", errors));
        }
    }
    if (const json* ch = top.child("channel")) {
        Reader r(*ch, "channel", errors);
        auto& s = c.channel;
        r.get("carrier_hz", s.carrier_hz);
        r.get("upsample_factor", s.upsample_factor);
        r.get("snr_db", s.snr_db);
        r.get("iq_amp", s.iq_amp);
        r.get("iq_phase_deg", s.iq_phase_deg);
        r.get("pn_sigma_deg", s.pn_sigma_deg);
        std::string init;
        r.get("pn_initial", init);
        if (init == "uniform")
            s.pn_initial = PhaseNoiseInit::uniform_random;
        else if (!init.empty() && init != "zero")
            r.fail("pn_initial", "expected \"zero\" or \"uniform\"");
        std::vector<double> range, vel;
        r.get("range_m", range);
        r.get("velocity_mps", vel);
        if (r.has("range_m")) {
            if (range.size() == 2) {
                s.range_min_m = range[0];
                s.range_max_m = range[1];
            } else {
                r.fail("range_m", "expected [min, max]");
            }
        }
        if (r.has("velocity_mps")) {
            if (vel.size() == 2) {
                s.velocity_min_mps = vel[0];
                s.velocity_max_mps = vel[1];
            } else {
                r.fail("velocity_mps", "expected [min, max]");
            }
        }
        r.finish();
    }
    if (const json* cf = top.child("cfar")) {
        Reader r(*cf, "cfar", errors);
        r.get("threshold_db", c.cfar.threshold_db);
        r.get("train_cells", c.cfar.train_cells);
        r.get("guard_cells", c.cfar.guard_cells);
        r.get("temp_radius", c.cfar.temp_radius);
        r.finish();
    }
    if (const json* cp = top.child("cpi")) {
        Reader r(*cp, "cpi", errors);
        r.get("Q", c.cpi.Q);
        r.get("w", c.cpi.w);
        r.finish();
    }
    if (const json* sw = top.child("sweep")) {
        Reader r(*sw, "sweep", errors);
        r.get("snr_db", c.sweep.snr_db);
        r.get("threshold_db", c.sweep.threshold_db);
        r.get("extension", c.sweep.extension);
        r.get("ebn0_db", c.sweep.ebn0_db);
        r.finish();
    }
    if (const json* pf = top.child("profile")) {
        Reader r(*pf, "profile", errors);
        r.get("vl", c.profile.vl);
        r.get("distance", c.profile.distance);
        r.get("level_db", c.profile.level_db);
        r.finish();
    }
    top.finish();
    if (!errors.empty()) throw ConfigError(errors);
    validate(c);
    return c;
}

bool odd_length_ok(long long L) { return L >= 3 && L % 2 == 1; }

}  // namespace

ConfigError::ConfigError(std::vector<FieldError> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [s, n] : scenario_table()) v.push_back(n);
        return v;
    }();
    return names;
}

std::string scenario_name(Scenario s) {
    for (const auto& [k, n] : scenario_table())
        if (k == s) return n;
    return "unknown";
}

std::optional<Scenario> parse_scenario(const std::string& name) {
    for (const auto& [k, n] : scenario_table())
        if (n == name) return k;
    return std::nullopt;
}

long long RootRule::resolve(long long length) const {
    switch (kind) {
        case Kind::value: return value;
        case Kind::designed: return zc_root_design(length);
        case Kind::low: return (length - 1) / 2;
        case Kind::high: return (length + 1) / 2;
    }
    return value;
}

std::string RootRule::describe() const {
    switch (kind) {
        case Kind::value: return std::to_string(value);
        case Kind::designed: return "designed";
        case Kind::low: return "(L-1)/2";
        case Kind::high: return "(L+1)/2";
    }
    return "";
}

CfarConfig CfarSection::to_config() const {
    CfarConfig c;
    c.threshold = std::pow(10.0, threshold_db / 10.0);
    c.train_cells = train_cells;
    c.guard_cells = guard_cells;
    c.temp_radius = temp_radius;
    return c;
}

void validate(const ExperimentConfig& c) {
    std::vector<FieldError> e;
    auto check = [&](bool ok, const std::string& field, const std::string& msg) {
        if (!ok) e.push_back({field, msg});
    };
    check(c.schema_version == kSchemaVersion, "schema_version", "unsupported version " + std::to_string(c.schema_version));
    check(c.trials >= 1, "trials", "must be >= 1");
    check(c.scale > 0.0 && c.scale <= 1.0, "scale", "must lie in (0, 1]");
    check(c.search_budget >= 1, "search_budget", "must be >= 1");

    check(!c.waveforms.empty(), "waveforms", "at least one waveform required");
    for (std::size_t i = 0; i < c.waveforms.size(); ++i) {
        const auto& w = c.waveforms[i];
        const std::string p = "waveforms[" + std::to_string(i) + "].";
        const bool multi = w.kind == "msqp" || w.kind == "de-msqp";
        check(multi || w.kind == "zc" || w.kind == "lfm", p + "kind", "expected msqp, de-msqp, zc or lfm");
        check(w.sample_period_s > 0.0, p + "sample_period_s", "must be positive");
        if (multi) {
            check(w.subbands >= 1, p + "subbands", "must be >= 1");
            check(odd_length_ok(w.subband_len), p + "subband_len", "must be odd and >= 3");
            check(w.guard_len >= 0, p + "guard_len", "must be >= 0");
            check(w.sampling == "subband" || w.sampling == "full", p + "sampling", "expected \"subband\" or \"full\"");
            if (odd_length_ok(w.subband_len) && w.root.kind == RootRule::Kind::value)
                check(w.root.value >= 1 && w.root.value < w.subband_len && std::gcd(w.root.value, w.subband_len) == 1,
                      p + "root", "must be in [1, L) and coprime with L");
        }
        if (w.kind == "de-msqp") {
            check(w.extension >= 1, p + "extension", "must be >= 1");
            check(!w.guard_len_ext || *w.guard_len_ext >= 0, p + "guard_len_ext", "must be >= 0");
            check(w.cp_len >= 0, p + "cp_len", "must be >= 0");
        }
        if (w.kind == "zc") {
            check(odd_length_ok(w.zc_len), p + "zc_len", "must be odd and >= 3");
            if (w.root.kind == RootRule::Kind::value && odd_length_ok(w.zc_len))
                check(w.root.value >= 1 && w.root.value < w.zc_len && std::gcd(w.root.value, w.zc_len) == 1, p + "root",
                      "must be in [1, L) and coprime with L");
        }
        if (w.kind == "lfm") {
            check(w.lfm_duration_s > 0.0, p + "lfm_duration_s", "must be positive");
            check(w.lfm_bandwidth_hz > 0.0 && w.lfm_bandwidth_hz * w.sample_period_s <= 1.0 + 1e-12, p + "lfm_bandwidth_hz",
                  "must be positive and within the sampling rate");
        }
    }

    const auto& ch = c.channel;
    check(ch.carrier_hz > 0.0, "channel.carrier_hz", "must be positive");
    check(ch.upsample_factor >= 1, "channel.upsample_factor", "must be >= 1");
    check(ch.iq_amp > -1.0 && ch.iq_amp < 1.0, "channel.iq_amp", "must lie in (-1, 1)");
    check(ch.pn_sigma_deg >= 0.0, "channel.pn_sigma_deg", "must be >= 0");
    check(ch.range_min_m >= 0.0 && ch.range_min_m <= ch.range_max_m, "channel.range_m", "need 0 <= min <= max");
    check(ch.velocity_min_mps <= ch.velocity_max_mps, "channel.velocity_mps", "need min <= max");

    check(c.cfar.train_cells >= 1, "cfar.train_cells", "must be >= 1");
    check(c.cfar.guard_cells >= 0, "cfar.guard_cells", "must be >= 0");
    check(c.cfar.temp_radius >= 0, "cfar.temp_radius", "must be >= 0");
    check(c.cpi.Q >= 1, "cpi.Q", "must be >= 1");
    check(c.cpi.w >= 1, "cpi.w", "must be >= 1");
    for (int m : c.sweep.extension) check(m >= 1, "sweep.extension", "entries must be >= 1");
    check(c.profile.distance >= 0, "profile.distance", "must be >= 0");

    const bool radar = c.scenario == Scenario::false_alarm || c.scenario == Scenario::ranging ||
                       c.scenario == Scenario::velocity || c.scenario == Scenario::tradeoff;
    if (radar) {
        for (std::size_t i = 0; i < c.waveforms.size(); ++i) {
            const auto& w = c.waveforms[i];
            const int ext = w.kind == "de-msqp" ? w.extension : 1;
            if (c.scenario != Scenario::tradeoff)
                check(c.cpi.Q % ext == 0, "cpi.Q", "must be a multiple of the extension of waveforms[" + std::to_string(i) + "]");
            check(w.kind != "de-msqp" || w.cp_len == 0, "waveforms[" + std::to_string(i) + "].cp_len",
                  "sensing scenarios need back-to-back blocks (cp_len 0)");
        }
    }
    if (c.scenario == Scenario::tradeoff) {
        check(!c.sweep.extension.empty(), "sweep.extension", "required for this scenario");
        for (int m : c.sweep.extension) check(m < 1 || c.cpi.Q % m == 0, "cpi.Q", "must be a multiple of every swept extension");
        for (const auto& w : c.waveforms) check(w.kind == "de-msqp" || w.kind == "msqp", "waveforms", "tradeoff needs msqp or de-msqp");
    }
    if (c.scenario == Scenario::false_alarm) check(!c.sweep.threshold_db.empty(), "sweep.threshold_db", "required for this scenario");
    if (c.scenario == Scenario::false_alarm) check(ch.snr_db.has_value(), "channel.snr_db", "required for this scenario");
    if (c.scenario == Scenario::ranging || c.scenario == Scenario::velocity)
        check(!c.sweep.snr_db.empty() || ch.snr_db.has_value(), "sweep.snr_db", "give a sweep or channel.snr_db");
    if (c.scenario == Scenario::loopback_ber || c.scenario == Scenario::root_design || c.scenario == Scenario::xcorr ||
        c.scenario == Scenario::papr) {
        for (std::size_t i = 0; i < c.waveforms.size(); ++i) {
            const auto& w = c.waveforms[i];
            const std::string f = "waveforms[" + std::to_string(i) + "].kind";
            if (c.scenario == Scenario::loopback_ber) check(w.kind == "de-msqp", f, "loopback-ber needs de-msqp");
            if (c.scenario == Scenario::root_design || c.scenario == Scenario::xcorr)
                check(w.kind == "msqp" || w.kind == "de-msqp", f, "needs msqp or de-msqp");
        }
    }
    if (!e.empty()) throw ConfigError(e);
}

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& ex) {
        throw ConfigError({{"", std::string("malformed JSON: ") + ex.what()}});
    }
    return from_json(doc);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error(path + ": cannot open config");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

namespace {

long long scale_odd(long long L, double s) {
    long long v = std::llround(static_cast<double>(L) * s);
    if (v % 2 == 0) ++v;
    return std::max<long long>(3, v);
}

}  // namespace

ExperimentConfig apply_scale(const ExperimentConfig& cfg) {
    if (cfg.scale == 1.0) return cfg;
    ExperimentConfig c = cfg;
    const double s = cfg.scale;
    for (auto& w : c.waveforms) {
        w.subband_len = scale_odd(w.subband_len, s);
        w.guard_len = std::llround(static_cast<double>(w.guard_len) * s);
        if (w.guard_len_ext) w.guard_len_ext = std::llround(static_cast<double>(*w.guard_len_ext) * s);
        w.cp_len = std::llround(static_cast<double>(w.cp_len) * s);
        w.zc_len = scale_odd(w.zc_len, s);
        w.lfm_duration_s *= s;
        // explicit roots must stay coprime with the new length
        if (w.root.kind == RootRule::Kind::value) {
            const long long L = w.kind == "zc" ? w.zc_len : w.subband_len;
            while (std::gcd(w.root.value, L) != 1) ++w.root.value;
        }
    }
    // Q stays a multiple of every extension in play
    long long step = 1;
    for (int m : c.sweep.extension) step = std::lcm(step, static_cast<long long>(m));
    for (const auto& w : c.waveforms)
        if (w.kind == "de-msqp") step = std::lcm(step, static_cast<long long>(w.extension));
    const long long q = std::llround(static_cast<double>(cfg.cpi.Q) * s / static_cast<double>(step)) * step;
    c.cpi.Q = static_cast<int>(std::max(step, q));
    c.scale = 1.0;
    validate(c);
    return c;
}

}  // namespace jrc::harness
