#include "gridpeak/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gridpeak/errors.hpp"

namespace gridpeak {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

double require_positive(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw InputError(std::string("missing numeric field ") + key);
    }
    const double v = j[key].get<double>();
    if (!(v > 0.0)) throw InputError(std::string(key) + " must be positive");
    return v;
}

ConductorClass parse_class(const std::string& s, int branch_id) {
    if (s == "overhead") return ConductorClass::overhead;
    if (s == "underground") return ConductorClass::underground;
    if (s == "transformer") return ConductorClass::transformer;
    throw InputError("branch " + std::to_string(branch_id) + ": unknown class '" + s + "'");
}

double default_tau_h(ConductorClass c) {
    switch (c) {
        case ConductorClass::transformer: return 4.0;
        case ConductorClass::overhead: return 0.25;
        case ConductorClass::underground: return 8.0;
    }
    return 1.0;
}

ThermalLadderSpec parse_thermal(const json& j, ConductorClass cls, int branch_id) {
    ThermalLadderSpec spec;
    spec.model = cls == ConductorClass::transformer ? ThermalModel::ladder
                                                    : ThermalModel::heat_balance;
    if (j.contains("model")) {
        const auto m = j["model"].get<std::string>();
        if (m == "heat_balance") spec.model = ThermalModel::heat_balance;
        else if (m == "ladder") spec.model = ThermalModel::ladder;
        else throw InputError("branch " + std::to_string(branch_id) + ": unknown thermal model '" + m + "'");
    }
    if (j.contains("loops")) {
        for (const auto& lj : j["loops"]) {
            ThermalLoop loop;
            loop.tau_h = lj.value("tau_h", default_tau_h(cls));
            loop.t_k_per_w = lj.value("t_k_per_w", spec.model == ThermalModel::heat_balance ? 1.0 : 0.0);
            spec.loops.push_back(loop);
        }
    } else {
        spec.loops.push_back({default_tau_h(cls),
                              spec.model == ThermalModel::heat_balance ? 1.0 : 0.0});
    }
    spec.dielectric_rise_k = j.value("dielectric_rise_k", 0.0);
    spec.hot_spot_limit_c = j.value("hot_spot_limit_c", 90.0);
    spec.hotspot_rise_k_per_w = j.value("hotspot_rise_k_per_w", 0.0);
    if (j.contains("conductor")) {
        const auto& c = j["conductor"];
        spec.conductor.r0 = c.value("r0", 0.0);
        spec.conductor.alpha_per_k = c.value("alpha_per_k", 0.0);
        spec.conductor.theta_ref_c = c.value("theta_ref_c", 25.0);
    }
    if (j.contains("cooling")) {
        const auto& c = j["cooling"];
        spec.cooling.conv_a = c.value("conv_a", 1.0);
        spec.cooling.conv_b = c.value("conv_b", 0.0);
        spec.cooling.emissivity = c.value("emissivity", 0.0);
        spec.cooling.absorptivity = c.value("absorptivity", 0.0);
        spec.cooling.diameter_m = c.value("diameter_m", 0.02);
    }
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw InputError("branch " + std::to_string(branch_id) + ": " + e.what());
    }
    return spec;
}

} // namespace

RadialNetwork parse_network(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("network file is not valid JSON: ") + e.what());
    }

    if (doc.value("version", "") != "gridpeak-net/1") {
        throw InputError("unsupported network file version, expected gridpeak-net/1");
    }

    RadialNetwork net;
    net.base_mva = require_positive(doc, "base_mva");
    net.base_kv = require_positive(doc, "base_kv");
    net.base_current_a = net.base_mva * 1e6 / (std::sqrt(3.0) * net.base_kv * 1e3);
    const double z_base = net.base_kv * net.base_kv / net.base_mva;

    if (!doc.contains("buses") || !doc.contains("branches")) {
        throw InputError("network file needs buses and branches arrays");
    }
    for (const auto& bj : doc["buses"]) {
        Bus b;
        b.id = bj.at("id").get<int>();
        const auto kind = bj.value("kind", "load");
        if (kind == "substation") b.kind = BusKind::substation;
        else if (kind == "load") b.kind = BusKind::load_node;
        else throw InputError("bus " + std::to_string(b.id) + ": unknown kind '" + kind + "'");
        b.nominal_kv = bj.value("kv", net.base_kv);
        net.buses.push_back(b);
    }

    for (const auto& bj : doc["branches"]) {
        Branch br;
        br.id = bj.at("id").get<int>();
        br.from_bus = bj.at("from").get<int>();
        br.to_bus = bj.at("to").get<int>();
        if (net.bus_index(br.from_bus) < 0 || net.bus_index(br.to_bus) < 0) {
            throw InputError("branch " + std::to_string(br.id) + " references an unknown bus");
        }
        const double r_ohm = bj.at("r_ohm").get<double>();
        const double x_ohm = bj.at("x_ohm").get<double>();
        if (r_ohm < 0.0) throw InputError("branch " + std::to_string(br.id) + ": negative resistance");
        br.impedance_pu = Complex(r_ohm, x_ohm) / z_base;
        br.conductor = parse_class(bj.value("class", "overhead"), br.id);
        br.static_rating_a = bj.at("static_rating_a").get<double>();
        if (!(br.static_rating_a > 0.0)) {
            throw InputError("branch " + std::to_string(br.id) + ": static rating must be positive");
        }
        if (!bj.contains("thermal")) {
            throw InputError("branch " + std::to_string(br.id) + ": thermal parameters required");
        }
        br.thermal = parse_thermal(bj["thermal"], br.conductor, br.id);
        net.branches.push_back(br);
    }

    for (const auto& lj : doc.value("loads", json::array())) {
        ZipLoad load;
        load.bus = lj.at("bus").get<int>();
        const int bus_idx = net.bus_index(load.bus);
        if (bus_idx < 0) {
            throw InputError("load references unknown bus " + std::to_string(load.bus));
        }
        if (net.buses[static_cast<std::size_t>(bus_idx)].kind == BusKind::substation) {
            throw InputError("load attached to substation bus " + std::to_string(load.bus));
        }
        const auto& p = lj.at("p0_kw");
        const auto& q = lj.at("q0_kvar");
        if (p.size() != 24 || q.size() != 24) {
            throw InputError("load at bus " + std::to_string(load.bus) +
                             ": baseline profiles must have 24 hourly entries");
        }
        for (int h = 0; h < 24; ++h) {
            load.baseline_p_kw[static_cast<std::size_t>(h)] = p[static_cast<std::size_t>(h)].get<double>();
            load.baseline_q_kvar[static_cast<std::size_t>(h)] = q[static_cast<std::size_t>(h)].get<double>();
            if (load.baseline_p_kw[static_cast<std::size_t>(h)] < 0.0) {
                throw InputError("load at bus " + std::to_string(load.bus) + ": negative baseline");
            }
        }
        load.ref_voltage_pu = lj.value("v0_pu", 1.0);
        if (!(load.ref_voltage_pu >= 0.9 && load.ref_voltage_pu <= 1.1)) {
            throw InputError("load at bus " + std::to_string(load.bus) +
                             ": reference voltage outside [0.9, 1.1]");
        }
        if (lj.contains("zip")) {
            const auto& z = lj["zip"];
            load.zip = {z.value("czp", 0.0), z.value("cip", 0.0), z.value("cpp", 1.0),
                        z.value("czq", 0.0), z.value("ciq", 0.0), z.value("cpq", 1.0)};
        }
        try {
            load.zip.validate();
        } catch (const std::exception& e) {
            throw InputError("load at bus " + std::to_string(load.bus) + ": " + e.what());
        }
        load.curtailable = lj.value("curtailable", false);
        load.penalty_usd_per_kw = lj.value("penalty_usd_per_kw", 0.0);
        if (load.penalty_usd_per_kw < 0.0) {
            throw InputError("load at bus " + std::to_string(load.bus) + ": negative penalty price");
        }
        net.loads.push_back(load);
    }
    return net;
}

RadialNetwork load_network(const std::string& path) {
    return parse_network(read_file(path));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        const auto a = cell.find_first_not_of(" \t\r");
        const auto b = cell.find_last_not_of(" \t\r");
        cells.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
    }
    return cells;
}

/// Shared 24-hour CSV scaffold: checks the header, then hands each data row
/// to `consume(hour, cells)` and verifies every hour appears exactly once.
template <class Consume>
void read_hourly_csv(const std::string& path, const std::string& expected_header,
                     std::size_t n_cols, Consume&& consume) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw InputError(path + ": empty file");
    {
        auto h = split_csv_line(line);
        std::string joined;
        for (std::size_t i = 0; i < h.size(); ++i) joined += (i ? "," : "") + h[i];
        if (joined != expected_header) {
            throw InputError(path + ": expected header '" + expected_header + "', got '" + joined + "'");
        }
    }
    std::vector<bool> seen(24, false);
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != n_cols) throw InputError(path + ": malformed row '" + line + "'");
        int hour = 0;
        try {
            hour = std::stoi(cells[0]);
        } catch (...) {
            throw InputError(path + ": bad hour in row '" + line + "'");
        }
        if (hour < 0 || hour > 23) throw InputError(path + ": hour out of range in row '" + line + "'");
        if (seen[static_cast<std::size_t>(hour)]) {
            throw InputError(path + ": hour " + std::to_string(hour) + " appears twice");
        }
        seen[static_cast<std::size_t>(hour)] = true;
        consume(hour, cells);
    }
    for (int h = 0; h < 24; ++h) {
        if (!seen[static_cast<std::size_t>(h)]) {
            throw InputError(path + ": missing hour " + std::to_string(h));
        }
    }
}

double parse_cell(const std::string& s, const std::string& path) {
    try {
        return std::stod(s);
    } catch (...) {
        throw InputError(path + ": non-numeric value '" + s + "'");
    }
}

} // namespace

WeatherSeries load_weather_csv(const std::string& path) {
    WeatherSeries series(24);
    read_hourly_csv(path, "hour,ambient_c,wind_mps,solar_wm2", 4,
                    [&](int hour, const std::vector<std::string>& cells) {
                        WeatherSample s;
                        s.ambient_c = parse_cell(cells[1], path);
                        s.wind_mps = parse_cell(cells[2], path);
                        s.solar_wm2 = parse_cell(cells[3], path);
                        if (s.wind_mps < 0.0 || s.solar_wm2 < 0.0) {
                            throw InputError(path + ": wind and solar must be non-negative");
                        }
                        series[static_cast<std::size_t>(hour)] = s;
                    });
    return series;
}

PriceSeries load_prices_csv(const std::string& path) {
    PriceSeries prices(24, 0.0);
    read_hourly_csv(path, "hour,usd_per_kwh", 2,
                    [&](int hour, const std::vector<std::string>& cells) {
                        const double p = parse_cell(cells[1], path);
                        if (p < 0.0) throw InputError(path + ": negative price");
                        prices[static_cast<std::size_t>(hour)] = p;
                    });
    return prices;
}

std::uint64_t file_fingerprint(const std::string& path) {
    const std::string bytes = read_file(path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace gridpeak
