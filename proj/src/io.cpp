#include "manet/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "manet/error.hpp"

namespace manet {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ParameterError(where + " must be a JSON object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw ParameterError(where + ": unknown key '" + key + "'");
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ParameterError(std::string("config key '") + key + "' has the wrong type");
    }
}

Schedule parse_schedule(const json& j, const std::string& where) {
    check_keys(j, {"prefix", "tail"}, where);
    Schedule s;
    s.prefix = get_or<std::vector<double>>(j, "prefix", {});
    s.tail = get_or<std::vector<double>>(j, "tail", {});
    return s;
}

ProtocolSpec parse_protocol(const json& j) {
    const auto kind = get_or<std::string>(j, "kind", "");
    if (kind == "fair-uniform") {
        check_keys(j, {"kind"}, "protocol");
        return ProtocolSpec::fair_uniform();
    }
    if (kind == "oblivious-schedule") {
        check_keys(j, {"kind", "schedules", "default"}, "protocol");
        ObliviousSchedule o;
        if (j.contains("schedules")) {
            if (!j["schedules"].is_object()) throw ParameterError("protocol.schedules must map node ids to schedules");
            for (const auto& [key, value] : j["schedules"].items()) {
                NodeId id = 0;
                try {
                    id = std::stoi(key);
                } catch (const std::exception&) {
                    throw ParameterError("protocol.schedules: '" + key + "' is not a node id");
                }
                o.schedules[id] = parse_schedule(value, "schedule of node " + key);
            }
        }
        if (j.contains("default")) o.fallback = parse_schedule(j["default"], "default schedule");
        return ProtocolSpec{o};
    }
    if (kind == "locally-adaptive") {
        check_keys(j, {"kind", "rule", "params"}, "protocol");
        return ProtocolSpec::adaptive(get_or<std::string>(j, "rule", ""),
                                      get_or<std::map<std::string, double>>(j, "params", {}));
    }
    throw ParameterError("unknown protocol kind '" + kind + "'");
}

std::vector<Point> parse_points(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParameterError(where + " must be an array of [x, y]");
    std::vector<Point> out;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw ParameterError(where + " must be an array of [x, y]");
        out.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return out;
}

ScriptTable parse_rows(const json& j) {
    if (!j.is_array()) throw ParameterError("adversary.rows must be an array of slots");
    ScriptTable t;
    for (const auto& row : j) {
        if (!row.is_array()) throw ParameterError("adversary.rows: each slot is an array of [x, y, active]");
        std::vector<ScriptEntry> entries;
        for (const auto& e : row) {
            if (!e.is_array() || (e.size() != 2 && e.size() != 3))
                throw ParameterError("adversary.rows: entries are [x, y] or [x, y, active]");
            ScriptEntry s{{e[0].get<double>(), e[1].get<double>()}, true};
            if (e.size() == 3) s.active = e[2].is_boolean() ? e[2].get<bool>() : e[2].get<int>() != 0;
            entries.push_back(s);
        }
        t.slots.push_back(std::move(entries));
    }
    return t;
}

AdversarySpec parse_adversary(const json& j, std::size_t n, double r, const std::filesystem::path& base_dir) {
    check_keys(j, {"kind", "k", "rollouts", "epsilon", "positions", "layout", "table", "rows", "generator", "cyclic"},
               "adversary");
    AdversarySpec spec;
    spec.kind = adversary_kind_from_string(get_or<std::string>(j, "kind", "static"));
    spec.k = get_or<std::size_t>(j, "k", 0);
    spec.rollouts = get_or<std::size_t>(j, "rollouts", spec.rollouts);
    spec.epsilon = get_or<double>(j, "epsilon", spec.epsilon);
    if (j.contains("positions")) spec.positions = parse_points(j["positions"], "adversary.positions");
    if (j.contains("layout")) {
        const json& l = j["layout"];
        check_keys(l, {"shape", "spacing"}, "adversary.layout");
        const auto shape = get_or<std::string>(l, "shape", "line");
        if (shape != "line") throw ParameterError("adversary.layout: unknown shape '" + shape + "'");
        spec.positions = line_layout(n, get_or<double>(l, "spacing", 0.9 * r));
    }

    const int sources = j.contains("table") + j.contains("rows") + j.contains("generator");
    if (sources > 1) throw ParameterError("adversary: give only one of table, rows, generator");
    if (j.contains("table")) {
        std::filesystem::path p = get_or<std::string>(j, "table", "");
        if (p.is_relative()) p = base_dir / p;
        std::ifstream in(p);
        if (!in) throw ParameterError("cannot read script table " + p.string());
        spec.script = read_script_csv(in, n);
    } else if (j.contains("rows")) {
        spec.script = parse_rows(j["rows"]);
    } else if (j.contains("generator")) {
        const auto g = get_or<std::string>(j, "generator", "");
        if (g == "alternating-path") spec.script = alternating_path_script(n, r);
        else if (g == "static-path") spec.script = static_path_script(n, r);
        else throw ParameterError("adversary: unknown generator '" + g + "'");
    }
    if (spec.script && j.contains("cyclic")) spec.script->cyclic = get_or<bool>(j, "cyclic", false);
    return spec;
}

}  // namespace

SimConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j, {"n", "r", "d", "alpha", "beta", "v_max", "max_slots", "seed", "protocol", "adversary",
                   "predicate"},
               "config");
    SimConfig cfg;
    cfg.n = get_or<std::size_t>(j, "n", cfg.n);
    cfg.r = get_or<double>(j, "r", cfg.r);
    cfg.d = get_or<double>(j, "d", cfg.d);
    cfg.alpha = get_or<long>(j, "alpha", cfg.alpha);
    cfg.beta = get_or<long>(j, "beta", cfg.beta);
    cfg.v_max = get_or<double>(j, "v_max", cfg.v_max);
    cfg.max_slots = get_or<long>(j, "max_slots", cfg.max_slots);
    cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
    const auto predicate = get_or<std::string>(j, "predicate", "all-nodes");
    if (predicate == "all-nodes") cfg.predicate = Predicate::AllNodes;
    else if (predicate == "geocast") cfg.predicate = Predicate::Geocast;
    else throw ParameterError("unknown predicate '" + predicate + "'");
    if (j.contains("protocol")) cfg.protocol = parse_protocol(j["protocol"]);
    if (j.contains("adversary")) cfg.adversary = parse_adversary(j["adversary"], cfg.n, cfg.r, base_dir);
    cfg.validate();
    return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

ScriptTable read_script_csv(std::istream& in, std::size_t n) {
    std::string line;
    if (!std::getline(in, line)) throw MalformedInput("script table is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "slot,node,x,y,active") throw MalformedInput("script table header must be slot,node,x,y,active");

    ScriptTable t;
    std::vector<std::vector<std::uint8_t>> seen;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string cell[5];
        for (auto& c : cell)
            if (!std::getline(fields, c, ',')) throw MalformedInput("script line " + std::to_string(lineno) + ": expected 5 fields");
        long slot = 0, node = 0, active = 0;
        double x = 0, y = 0;
        try {
            slot = std::stol(cell[0]);
            node = std::stol(cell[1]);
            x = std::stod(cell[2]);
            y = std::stod(cell[3]);
            active = std::stol(cell[4]);
        } catch (const std::exception&) {
            throw MalformedInput("script line " + std::to_string(lineno) + ": unparsable field");
        }
        if (slot < 1 || node < 1 || static_cast<std::size_t>(node) > n || (active != 0 && active != 1))
            throw MalformedInput("script line " + std::to_string(lineno) + ": slot, node or active out of range");
        const auto s = static_cast<std::size_t>(slot);
        if (t.slots.size() < s) {
            t.slots.resize(s, std::vector<ScriptEntry>(n));
            seen.resize(s, std::vector<std::uint8_t>(n, 0));
        }
        auto& mark = seen[s - 1][index_of(static_cast<NodeId>(node))];
        if (mark) throw MalformedInput("script line " + std::to_string(lineno) + ": duplicate (slot, node)");
        mark = 1;
        t.slots[s - 1][index_of(static_cast<NodeId>(node))] = {{x, y}, active == 1};
    }
    for (std::size_t s = 0; s < seen.size(); ++s)
        for (std::size_t i = 0; i < n; ++i)
            if (!seen[s][i])
                throw MalformedInput("script table misses node " + std::to_string(id_of(i)) + " in slot " +
                                     std::to_string(s + 1));
    if (t.slots.empty()) throw MalformedInput("script table has no rows");
    return t;
}

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

void write_trace(std::ostream& out, const Trace& trace) {
    const TraceMeta& m = trace.meta;
    ordered_json header = {{"n", m.n}, {"r", m.r}, {"d", m.d}, {"alpha", m.alpha}, {"beta", m.beta},
                           {"t1", m.t1}, {"targets", m.targets}, {"seed", m.seed}};
    header["solved_slot"] = m.solved_slot ? ordered_json(*m.solved_slot) : ordered_json(nullptr);
    out << ordered_json{{"header", header}}.dump() << '\n';

    for (const auto& rec : trace.slots) {
        ordered_json line;
        line["slot"] = rec.slot;
        ordered_json pos = ordered_json::array();
        for (const auto& p : rec.state.positions) pos.push_back({p.x, p.y});
        line["positions"] = pos;
        line["active"] = rec.state.active;
        line["covered"] = rec.state.covered;
        line["informed"] = rec.state.informed;
        line["tx"] = rec.tx;
        ordered_json rx = ordered_json::object();
        for (const auto& [recv, sender] : rec.rx) rx[std::to_string(recv)] = sender;
        line["rx"] = rx;
        out << line.dump() << '\n';
    }
}

std::string trace_to_string(const Trace& trace) {
    std::ostringstream os;
    write_trace(os, trace);
    return os.str();
}

namespace {

std::vector<std::uint8_t> flags(const json& j, std::size_t n, const char* key, std::size_t lineno) {
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != n)
        throw MalformedInput("trace line " + std::to_string(lineno) + ": '" + key + "' must hold n flags");
    std::vector<std::uint8_t> out;
    for (const auto& v : j[key]) out.push_back(v.is_boolean() ? v.get<bool>() : v.get<int>() != 0);
    return out;
}

}  // namespace

Trace read_trace(std::istream& in, double fallback_r) {
    Trace trace;
    trace.meta.r = fallback_r;
    bool have_n = false;
    bool have_header = false;
    std::string line;
    std::size_t lineno = 0;
    try {
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            const json j = json::parse(line);
            if (j.contains("header")) {
                if (lineno != 1) throw MalformedInput("trace header must be the first line");
                const json& h = j["header"];
                trace.meta.n = h.at("n").get<std::size_t>();
                trace.meta.r = h.value("r", fallback_r);
                trace.meta.d = h.value("d", 0.0);
                trace.meta.alpha = h.value("alpha", 0L);
                trace.meta.beta = h.value("beta", 1L);
                trace.meta.seed = h.value("seed", std::uint64_t{0});
                trace.meta.t1 = h.value("t1", kSourceSlot);
                trace.meta.targets = h.value("targets", std::vector<NodeId>{});
                if (h.contains("solved_slot") && !h["solved_slot"].is_null())
                    trace.meta.solved_slot = h["solved_slot"].get<Slot>();
                have_n = true;
                have_header = true;
                continue;
            }
            SlotRecord rec;
            rec.slot = j.at("slot").get<Slot>();
            if (rec.slot != trace.last_slot() + 1)
                throw MalformedInput("trace line " + std::to_string(lineno) + ": slots must be consecutive from 1");
            const json& pos = j.at("positions");
            if (!have_n) {
                trace.meta.n = pos.size();
                have_n = true;
            }
            const std::size_t n = trace.meta.n;
            if (pos.size() != n) throw MalformedInput("trace line " + std::to_string(lineno) + ": wrong node count");
            for (const auto& p : pos) rec.state.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            rec.state.active = flags(j, n, "active", lineno);
            rec.state.covered = flags(j, n, "covered", lineno);
            rec.state.informed = flags(j, n, "informed", lineno);
            rec.tx = j.value("tx", std::vector<NodeId>{});
            if (j.contains("rx"))
                for (const auto& [key, sender] : j["rx"].items()) rec.rx[std::stoi(key)] = sender.get<NodeId>();
            trace.slots.push_back(std::move(rec));
        }
    } catch (const json::exception& e) {
        throw MalformedInput("trace line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!have_header && trace.meta.n > 0)
        for (std::size_t i = 0; i < trace.meta.n; ++i) trace.meta.targets.push_back(id_of(i));
    return trace;
}

}  // namespace manet
