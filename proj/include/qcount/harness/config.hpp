// Copyright 2026 The qcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qcount/analytic.hpp"
#include "qcount/common.hpp"
#include "qcount/grover.hpp"
#include "qcount/noise.hpp"

namespace qcount::harness {

using nlohmann::json;

/// Config problem anchored to a line of the source file.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

enum class Method : std::uint8_t { exact, sampled, analytic };

inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::sampled: return "sampled";
        case Method::analytic: return "analytic";
    }
    return "?";
}

inline Method parse_method(std::string_view s) {
    if (s == "exact") return Method::exact;
    if (s == "sampled") return Method::sampled;
    if (s == "analytic") return Method::analytic;
    throw std::invalid_argument("unknown method '" + std::string(s) + "' (expected exact|sampled|analytic)");
}

struct SweepSpec {
    std::string axis;  ///< j | k | d | ordering
    std::vector<json> values;
};

struct ExperimentConfig {
    std::string name = "experiment";
    int p = 0;
    int n = 0;
    std::string marked;
    std::vector<Ordering> orderings{Ordering::ascending};
    NoiseConfig noise;
    Method method = Method::exact;
    std::uint64_t trials = 0;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> outputs{"m_dist"};
    std::string form = "prob-avg";  ///< analytic method only
    int j = 0;                      ///< analytic method only
    std::uint64_t k = 0;            ///< analytic method only
    std::optional<SweepSpec> sweep;
    json source;                    ///< parsed document, echoed into the summary

    [[nodiscard]] Oracle oracle() const { return Oracle::parse(n, marked); }
    [[nodiscard]] bool wants(std::string_view output) const {
        return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
    }
};

namespace detail {

inline std::size_t line_at(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

/// Line of the last key in `path`, found by scanning for each key in turn.
/// Falls back to the line of the deepest key found.
inline std::size_t line_of_key(const std::string& text, const std::vector<std::string>& path) {
    std::size_t pos = 0;
    std::size_t line = 1;
    for (const auto& key : path) {
        const std::string needle = "\"" + key + "\"";
        std::size_t at = text.find(needle, pos);
        while (at != std::string::npos) {
            const auto colon = text.find_first_not_of(" \t\r\n", at + needle.size());
            if (colon != std::string::npos && text[colon] == ':') break;
            at = text.find(needle, at + 1);
        }
        if (at == std::string::npos) break;
        line = line_at(text, at);
        pos = at + needle.size();
    }
    return line;
}

class Reader {
  public:
    Reader(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& what) const {
        std::string dotted;
        for (const auto& k : path) dotted += (dotted.empty() ? "" : ".") + k;
        throw ConfigError(source_, line_of_key(text_, path), dotted.empty() ? what : dotted + ": " + what);
    }

    const json* find(const json& obj, const std::vector<std::string>& path) const {
        const json* cur = &obj;
        for (const auto& k : path) {
            if (!cur->is_object() || !cur->contains(k)) return nullptr;
            cur = &(*cur)[k];
        }
        return cur;
    }

    template <class T>
    T get(const json& doc, const std::vector<std::string>& path) const {
        const json* v = find(doc, path);
        if (v == nullptr) fail(path, "missing required key");
        return convert<T>(*v, path);
    }

    template <class T>
    std::optional<T> get_opt(const json& doc, const std::vector<std::string>& path) const {
        const json* v = find(doc, path);
        if (v == nullptr || v->is_null()) return std::nullopt;
        return convert<T>(*v, path);
    }

    template <class T>
    T convert(const json& v, const std::vector<std::string>& path) const {
        try {
            if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer()) fail(path, "expected an integer");
                if constexpr (std::is_unsigned_v<T>) {
                    if (v.get<std::int64_t>() < 0) fail(path, "expected a non-negative integer");
                }
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!v.is_number()) fail(path, "expected a number");
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string()) fail(path, "expected a string");
            }
            return v.get<T>();
        } catch (const json::exception& e) {
            fail(path, e.what());
        }
    }

    template <class F>
    auto guard(const std::vector<std::string>& path, F&& f) const -> decltype(f()) {
        try {
            return f();
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            fail(path, e.what());
        }
    }

  private:
    const std::string& text_;
    std::string source_;
};

inline std::string marked_to_text(const json& v, const Reader& r) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (const auto& x : v) {
            if (!x.is_number_unsigned() && !x.is_string()) r.fail({"marked"}, "array entries must be integers or ranges");
            if (!s.empty()) s += ',';
            s += x.is_string() ? x.get<std::string>() : std::to_string(x.get<std::uint64_t>());
        }
        return s;
    }
    r.fail({"marked"}, "expected a range string like \"0-12\" or an array");
}

inline Mat2 parse_unitary(const json& v, const Reader& r, const std::vector<std::string>& path) {
    if (!v.is_array() || v.size() != 4) r.fail(path, "expected 4 entries [re, im] in row-major order");
    Mat2 m;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& e = v[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            r.fail(path, "entry " + std::to_string(i) + " must be [re, im]");
        }
        m[i] = Complex{e[0].get<double>(), e[1].get<double>()};
    }
    return m;
}

}  // namespace detail

inline NoiseConfig parse_noise(const json& doc, const detail::Reader& r) {
    NoiseConfig nc;
    if (!doc.contains("noise") || doc["noise"].is_null()) return nc;
    if (!doc["noise"].is_object()) r.fail({"noise"}, "expected an object");
    using P = std::vector<std::string>;
    nc.d = r.get_opt<double>(doc, P{"noise", "d"}).value_or(0.0);
    if (auto s = r.get_opt<std::string>(doc, P{"noise", "register_scope"}))
        nc.register_scope = r.guard(P{"noise", "register_scope"}, [&] { return parse_register_scope(*s); });
    if (auto s = r.get_opt<std::string>(doc, P{"noise", "stage_scope"}))
        nc.stage_scope = r.guard(P{"noise", "stage_scope"}, [&] { return parse_stage_scope(*s); });
    if (auto s = r.get_opt<std::string>(doc, P{"noise", "mode"}))
        nc.mode = r.guard(P{"noise", "mode"}, [&] { return parse_noise_mode(*s); });
    if (const json* ev = r.find(doc, P{"noise", "event"}); ev != nullptr && !ev->is_null()) {
        ErrorEvent e;
        if (auto s = r.get_opt<std::string>(doc, P{"noise", "event", "pauli"}))
            e.pauli = r.guard(P{"noise", "event", "pauli"}, [&] { return parse_pauli(*s); });
        if (const json* u = r.find(doc, P{"noise", "event", "unitary"}); u != nullptr && !u->is_null())
            e.unitary = detail::parse_unitary(*u, r, P{"noise", "event", "unitary"});
        e.reg = r.guard(P{"noise", "event", "register"},
                        [&] { return parse_register(r.get<std::string>(doc, P{"noise", "event", "register"})); });
        e.j = r.get<int>(doc, P{"noise", "event", "j"});
        e.k = r.get<std::uint64_t>(doc, P{"noise", "event", "k"});
        e.q = r.get_opt<int>(doc, P{"noise", "event", "q"}).value_or(0);
        nc.event = e;
        if (!doc["noise"].contains("mode")) nc.mode = NoiseMode::single_event;
        if (!doc["noise"].contains("register_scope"))
            nc.register_scope = e.reg == Register::first ? RegisterScope::first : RegisterScope::second;
    }
    r.guard(P{"noise"}, [&] { nc.validate(); });
    return nc;
}

/// Parses and validates an experiment config. `source` names the file in messages.
inline ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>") {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source, detail::line_at(text, e.byte == 0 ? 0 : e.byte - 1), "invalid JSON: " + std::string(e.what()));
    }
    const detail::Reader r(text, source);
    if (!doc.is_object()) throw ConfigError(source, 1, "top level must be an object");
    using P = std::vector<std::string>;

    static const std::vector<std::string> known{"name",  "p",      "n",       "marked", "ordering", "noise", "method",
                                                "trials", "seed",  "outputs", "form",   "j",        "k",     "sweep"};
    for (const auto& [key, _] : doc.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) r.fail({key}, "unknown key");
    }

    ExperimentConfig c;
    c.source = doc;
    c.name = r.get_opt<std::string>(doc, P{"name"}).value_or("experiment");
    c.p = r.get<int>(doc, P{"p"});
    if (c.p < 1 || c.p > 24) r.fail({"p"}, "must be in [1, 24]");
    c.method = r.guard(P{"method"}, [&] { return parse_method(r.get_opt<std::string>(doc, P{"method"}).value_or("exact")); });

    const bool analytic_form_only_needs_f = c.method == Method::analytic;
    c.n = r.get<int>(doc, P{"n"});
    if (c.n < 1 || c.n > 26) r.fail({"n"}, "must be in [1, 26]");
    if (!analytic_form_only_needs_f && c.p + c.n > 30) r.fail({"p"}, "p + n exceeds 30 qubits");
    if (!doc.contains("marked")) r.fail({"marked"}, "missing required key");
    c.marked = detail::marked_to_text(doc["marked"], r);
    r.guard(P{"marked"}, [&] { (void)c.oracle(); });

    if (const json* o = r.find(doc, P{"ordering"}); o != nullptr) {
        c.orderings.clear();
        const auto one = [&](const json& v) {
            if (!v.is_string()) r.fail({"ordering"}, "expected a string or array of strings");
            c.orderings.push_back(r.guard(P{"ordering"}, [&] { return parse_ordering(v.get<std::string>()); }));
        };
        if (o->is_array()) {
            for (const auto& v : *o) one(v);
            if (c.orderings.empty()) r.fail({"ordering"}, "empty list");
        } else {
            one(*o);
        }
    }

    c.noise = parse_noise(doc, r);
    if (const auto& e = c.noise.event) {
        if (e->j < 0 || e->j >= c.p) r.fail({"noise", "event", "j"}, "must be in [0, p-1]");
        if (e->k > (std::uint64_t{1} << e->j)) r.fail({"noise", "event", "k"}, "must be in [0, 2^j]");
        if (e->reg == Register::second && (e->q < 0 || e->q >= c.n)) r.fail({"noise", "event", "q"}, "must be in [0, n-1]");
        r.guard(P{"noise", "event"}, [&] { validate_event(*e, c.p, c.n); });
    }
    c.trials = r.get_opt<std::uint64_t>(doc, P{"trials"}).value_or(0);
    c.seed = r.get_opt<std::uint64_t>(doc, P{"seed"});

    if (const json* o = r.find(doc, P{"outputs"}); o != nullptr) {
        if (!o->is_array()) r.fail({"outputs"}, "expected an array");
        c.outputs.clear();
        for (const auto& v : *o) {
            const auto s = v.is_string() ? v.get<std::string>() : std::string{};
            if (s != "m_dist" && s != "t_dist" && s != "analytic" && s != "compare")
                r.fail({"outputs"}, "unknown output '" + v.dump() + "' (expected m_dist|t_dist|analytic|compare)");
            c.outputs.push_back(s);
        }
    }

    c.form = r.get_opt<std::string>(doc, P{"form"}).value_or("prob-avg");
    c.j = r.get_opt<int>(doc, P{"j"}).value_or(0);
    c.k = r.get_opt<std::uint64_t>(doc, P{"k"}).value_or(0);

    if (const json* s = r.find(doc, P{"sweep"}); s != nullptr && !s->is_null()) {
        SweepSpec sw;
        sw.axis = r.get<std::string>(doc, P{"sweep", "axis"});
        if (sw.axis != "j" && sw.axis != "k" && sw.axis != "d" && sw.axis != "ordering")
            r.fail({"sweep", "axis"}, "must be one of j|k|d|ordering");
        const json* vals = r.find(doc, P{"sweep", "values"});
        if (vals == nullptr || !vals->is_array() || vals->empty()) r.fail({"sweep", "values"}, "expected a non-empty array");
        for (const auto& v : *vals) {
            const bool ok = sw.axis == "ordering" ? v.is_string() : sw.axis == "d" ? v.is_number() : v.is_number_unsigned();
            if (!ok) r.fail({"sweep", "values"}, "value " + v.dump() + " has the wrong type for axis " + sw.axis);
        }
        sw.values = *vals;
        c.sweep = std::move(sw);
    }

    // Cross-module constraints.
    for (Ordering o : c.orderings) {
        if (c.method == Method::exact && o == Ordering::semi_classical)
            r.fail({"ordering"}, "semi_classical ordering needs method \"sampled\"");
    }
    if (c.method == Method::exact && c.noise.stochastic_active())
        r.fail({"method"}, "exact runs accept only noiseless or single_event noise; use method \"sampled\"");
    if (c.method == Method::sampled) {
        if (c.trials == 0) r.fail({"trials"}, "sampled runs need trials >= 1");
        if (!c.seed) r.fail({"seed"}, "seed is mandatory for sampled runs");
    }
    if (c.method == Method::analytic) {
        r.guard(P{"form"}, [&] {
            if (c.form != "prob-avg" && c.form != "noiseless") (void)analytic::parse_second_register_form(c.form);
        });
        if (c.form != "noiseless") {
            if (c.j < 0 || c.j >= c.p) r.fail({"j"}, "must be in [0, p-1]");
            if (c.k > (std::uint64_t{1} << c.j)) r.fail({"k"}, "must be in [0, 2^j]");
        }
    }
    if (c.sweep && c.sweep->axis == "ordering" && c.method == Method::analytic)
        r.fail({"sweep", "axis"}, "axis ordering does not apply to method analytic");
    if (c.sweep && (c.sweep->axis == "j" || c.sweep->axis == "k") && c.method != Method::analytic && !c.noise.event)
        r.fail({"sweep", "axis"}, "axis " + c.sweep->axis + " needs method analytic or a noise.event");
    if (c.sweep && c.sweep->axis != "ordering" && c.orderings.size() > 1)
        r.fail({"ordering"}, "a sweep over " + c.sweep->axis + " takes a single ordering");
    if (c.sweep && c.sweep->axis == "d" && c.method == Method::analytic)
        r.fail({"sweep", "axis"}, "axis d does not apply to method analytic");
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error(path + ": cannot open");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str(), path);
}

}  // namespace qcount::harness
