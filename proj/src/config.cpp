#include "wgqed/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace wgqed {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

// A JSON object whose keys are consumed one by one; finish() rejects leftovers.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key)
    {
        used_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key, double fallback)
    {
        return has(key) ? number(key) : fallback;
    }
    double number(const std::string& key)
    {
        require(key);
        const json& v = raw(key);
        if (!v.is_number()) fail(join(path_, key), "expected a number");
        return v.get<double>();
    }
    int integer(const std::string& key, int fallback)
    {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number_integer()) fail(join(path_, key), "expected an integer");
        return v.get<int>();
    }
    bool boolean(const std::string& key, bool fallback)
    {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) fail(join(path_, key), "expected true or false");
        return v.get<bool>();
    }
    std::string string(const std::string& key, const std::string& fallback)
    {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_string()) fail(join(path_, key), "expected a string");
        return v.get<std::string>();
    }
    // number or array of numbers
    std::vector<double> numbers(const std::string& key)
    {
        if (!has(key)) return {};
        const json& v = raw(key);
        if (v.is_number()) return {v.get<double>()};
        if (!v.is_array()) fail(join(path_, key), "expected a number or an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) {
                fail(join(path_, key) + "[" + std::to_string(i) + "]", "expected a number");
            }
            out.push_back(v[i].get<double>());
        }
        return out;
    }
    Section child(const std::string& key)
    {
        require(key);
        return Section(raw(key), join(path_, key));
    }

    void require(const std::string& key) const
    {
        if (!has(key)) fail(join(path_, key), "required key is missing");
    }
    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!used_.count(it.key())) {
                fail(join(path_, it.key()), "unknown key (check spelling; see README)");
            }
        }
    }
    const std::string& path() const { return path_; }

    [[noreturn]] static void fail(const std::string& where, const std::string& what)
    {
        throw ConfigError("config error at '" + where + "': " + what);
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

template <typename E>
E choose(Section& s, const std::string& key, const std::string& fallback,
         std::initializer_list<std::pair<const char*, E>> options)
{
    const std::string v = s.string(key, fallback);
    std::string allowed;
    for (const auto& [name, value] : options) {
        if (v == name) return value;
        allowed += allowed.empty() ? name : std::string(", ") + name;
    }
    Section::fail(join(s.path(), key), "'" + v + "' is not one of: " + allowed);
}

ModulationSpec parse_modulation(Section m)
{
    const auto kind = choose<ModulationKind>(m, "kind", "none",
                                             {{"none", ModulationKind::none},
                                              {"sinusoid", ModulationKind::sinusoid},
                                              {"tabulated", ModulationKind::tabulated}});
    ModulationSpec out;
    if (kind == ModulationKind::sinusoid) {
        out = ModulationSpec::sinusoid(m.number("amplitude"), m.number("frequency"),
                                       m.number("phase", 0.0));
    } else if (kind == ModulationKind::tabulated) {
        m.require("times");
        m.require("values");
        try {
            out = ModulationSpec::tabulated(m.numbers("times"), m.numbers("values"));
        } catch (const ConfigError& e) {
            Section::fail(m.path(), e.what());
        }
    }
    m.finish();
    return out;
}

void parse_emitters(Section e, Scenario& s)
{
    const auto gwg = e.numbers("gamma_wg");
    const auto gng = e.numbers("gamma_ng");
    const bool chain = e.has("count");
    const bool explicit_phase = e.has("phase");
    const bool physical = e.has("positions");
    if (int(chain) + int(explicit_phase) + int(physical) != 1) {
        Section::fail(e.path(), "give exactly one of 'count' (+ 'spacing'), 'z' + 'phase', or "
                                "'positions' + 'lambda_a'");
    }
    try {
        if (chain) {
            const int n = e.integer("count", 1);
            if (n < 1) Section::fail(join(e.path(), "count"), "must be >= 1");
            const double spacing = e.number("spacing", 0.0);
            auto a = EmitterArray::chain(n, spacing, 1.0, 0.0);
            std::vector<double> z = e.numbers("z");
            if (!z.empty()) a.z = z.size() == 1 ? std::vector<double>(n, z[0]) : z;
            s.array = EmitterArray::phase_explicit(a.z, a.phase, gwg, gng);
        } else if (explicit_phase) {
            e.require("z");
            s.array = EmitterArray::phase_explicit(e.numbers("z"), e.numbers("phase"), gwg, gng);
        } else {
            e.require("lambda_a");
            s.array = EmitterArray::physical(e.numbers("positions"), e.number("lambda_a"), gwg,
                                             gng);
        }
    } catch (const ConfigError& err) {
        const std::string what = err.what();
        if (what.rfind("config error", 0) == 0) throw;
        Section::fail(e.path(), what);
    }
    if (e.has("lambda_a") && !physical) s.array.lambda_a = e.number("lambda_a");
    s.array.dipole_angle = e.number("dipole_angle", pi / 2);
    s.lambda.include_nonguided = e.boolean("nonguided", false);
    s.lambda.kernel = choose<DipoleKernel>(
        e, "dipole_kernel", "verbatim",
        {{"verbatim", DipoleKernel::verbatim}, {"standard", DipoleKernel::standard}});
    if (s.lambda.include_nonguided && !s.array.lambda_a) {
        Section::fail(join(e.path(), "nonguided"), "needs 'lambda_a'");
    }
    if (e.has("modulation")) {
        const json& m = e.raw("modulation");
        const std::string path = join(e.path(), "modulation");
        if (m.is_array()) {
            if (static_cast<int>(m.size()) != s.array.count()) {
                Section::fail(path, "needs one entry per emitter");
            }
            for (std::size_t j = 0; j < m.size(); ++j) {
                s.array.modulation[j] =
                    parse_modulation(Section(m[j], path + "[" + std::to_string(j) + "]"));
            }
        } else {
            const auto spec = parse_modulation(Section(m, path));
            for (auto& mm : s.array.modulation) mm = spec;
        }
    }
    if (e.has("excited")) {
        const json& x = e.raw("excited");
        const std::string path = join(e.path(), "excited");
        if (!x.is_array()) Section::fail(path, "expected an array of emitter numbers (1-based)");
        for (const auto& v : x) {
            if (!v.is_number_integer()) Section::fail(path, "expected integers");
            const int j = v.get<int>();
            if (j < 1 || j > s.array.count()) {
                Section::fail(path, "emitter " + std::to_string(j) + " does not exist");
            }
            s.initially_excited.push_back(j - 1);
        }
    }
    e.finish();
    s.array.validate();
}

void parse_pulse(Section p, Scenario& s, const std::string& base_dir)
{
    PulseSpec pulse;
    pulse.statistics = choose<Statistics>(p, "statistics", "vacuum",
                                          {{"vacuum", Statistics::vacuum},
                                           {"coherent", Statistics::coherent},
                                           {"fock", Statistics::fock}});
    if (pulse.statistics == Statistics::coherent) {
        pulse.mean_photons = p.number("mean_photons");
    }
    if (pulse.statistics == Statistics::fock) {
        p.require("photons");
        pulse.photons = p.integer("photons", 1);
    }
    if (pulse.statistics != Statistics::coherent && p.has("mean_photons")) {
        Section::fail(join(p.path(), "mean_photons"), "only valid for coherent pulses");
    }
    if (pulse.statistics != Statistics::fock && p.has("photons")) {
        Section::fail(join(p.path(), "photons"), "only valid for Fock pulses");
    }
    pulse.direction = choose<Direction>(p, "direction", "right",
                                        {{"right", Direction::right}, {"left", Direction::left}});
    const std::string shape = p.string("shape", "gaussian");
    if (shape == "gaussian") {
        GaussianShape g;
        g.delta = p.number("delta", 1.0);
        g.detuning = p.number("detuning", 0.0);
        pulse.shape = g;
    } else if (shape == "tabulated") {
        std::filesystem::path f = p.string("spectrum_file", "");
        if (f.empty()) Section::fail(join(p.path(), "spectrum_file"), "required for tabulated");
        if (f.is_relative()) f = std::filesystem::path(base_dir) / f;
        pulse.shape = TabulatedSpectrum::load(f.string());
    } else {
        Section::fail(join(p.path(), "shape"), "'" + shape + "' is not one of: gaussian, tabulated");
    }
    if (p.has("z0")) pulse.z0 = p.number("z0");
    p.finish();
    try {
        pulse.validate();
    } catch (const ConfigError& e) {
        Section::fail(p.path(), e.what());
    }
    s.pulse = pulse;
}

void parse_integrator(Section i, Scenario& s)
{
    auto& c = s.integrator;
    c.rtol = i.number("rtol", 1e-8);
    c.atol = i.number("atol", 1e-10);
    c.initial_step = i.number("initial_step", 0.0);
    if (i.has("max_step")) c.max_step = i.number("max_step");
    c.t_final = i.number("t_final", 0.0);
    s.sample_dt = i.number("sample_dt", 0.0);
    s.adaptive_final = i.boolean("adaptive_final", true);
    s.excitation_threshold = i.number("excitation_threshold", 1e-6);
    i.finish();
    if (!(c.rtol > 0) || !(c.atol > 0)) Section::fail(i.path(), "tolerances must be positive");
    if (!(c.max_step > 0)) Section::fail(join(i.path(), "max_step"), "must be positive");
    if (c.t_final < 0) Section::fail(join(i.path(), "t_final"), "must be >= 0");
    if (s.sample_dt < 0) Section::fail(join(i.path(), "sample_dt"), "must be >= 0");
}

SweepSpec parse_sweep(Section w, const Scenario& base)
{
    SweepSpec spec;
    spec.base = base;
    try {
        spec.axis = parse_axis(w.string("axis", "detuning"));
    } catch (const ConfigError& e) {
        Section::fail(join(w.path(), "axis"), e.what());
    }
    if (w.has("values") == w.has("range")) {
        Section::fail(w.path(), "give exactly one of 'values' or 'range'");
    }
    if (w.has("values")) {
        spec.values = w.numbers("values");
    } else {
        Section r = w.child("range");
        const double a = r.number("start"), b = r.number("stop");
        const int n = r.integer("count", 0);
        r.finish();
        if (n < 1) Section::fail(join(r.path(), "count"), "must be >= 1");
        for (int k = 0; k < n; ++k) spec.values.push_back(n == 1 ? a : a + (b - a) * k / (n - 1));
    }
    spec.plane_wave_width = w.number("plane_wave_width", 0.02);
    spec.convergence_check =
        w.boolean("convergence_check", spec.axis == SweepAxis::detuning);
    spec.chain_spacing = w.number("chain_spacing", 0.5);
    w.finish();
    try {
        spec.validate();
    } catch (const ConfigError& e) {
        Section::fail(w.path(), e.what());
    }
    return spec;
}

} // namespace

const char* policy_name(OverwritePolicy p)
{
    switch (p) {
    case OverwritePolicy::fail: return "fail";
    case OverwritePolicy::overwrite: return "overwrite";
    case OverwritePolicy::verify: return "verify";
    }
    return "?";
}

json parse_json_text(const std::string& text, const std::string& origin)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream os;
        os << origin << ":" << line << ":" << col << ": invalid JSON";
        const std::string msg = e.what();
        if (auto pos = msg.find("; last read"); pos != std::string::npos) {
            os << " (" << msg.substr(pos + 2) << ")";
        }
        throw ConfigError(os.str());
    }
}

RunConfig parse_config(const json& doc, const std::string& base_dir)
{
    RunConfig cfg;
    cfg.source = doc;
    Section root(doc, "");
    cfg.name = root.string("name", "run");
    cfg.scenario.name = cfg.name;
    parse_emitters(root.child("emitters"), cfg.scenario);
    if (root.has("pulse")) parse_pulse(root.child("pulse"), cfg.scenario, base_dir);
    if (root.has("integrator")) parse_integrator(root.child("integrator"), cfg.scenario);
    try {
        cfg.scenario.validate();
    } catch (const ConfigError& e) {
        Section::fail("<scenario>", e.what());
    }
    if (root.has("sweep")) cfg.sweep = parse_sweep(root.child("sweep"), cfg.scenario);
    if (root.has("output")) {
        Section o = root.child("output");
        cfg.output_dir = o.string("directory", "out");
        cfg.overwrite = choose<OverwritePolicy>(o, "overwrite", "fail",
                                                {{"fail", OverwritePolicy::fail},
                                                 {"overwrite", OverwritePolicy::overwrite},
                                                 {"verify", OverwritePolicy::verify}});
        o.finish();
    }
    cfg.workers = root.integer("workers", 1);
    if (cfg.workers < 1) Section::fail("workers", "must be >= 1");
    root.finish();
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto base = std::filesystem::path(path).parent_path();
    return parse_config(parse_json_text(ss.str(), path), base.empty() ? "." : base.string());
}

} // namespace wgqed
