#include "dcsim/config.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "dcsim/accord.h"
#include "dcsim/baseline_policies.h"
#include "dcsim/dwp.h"
#include "dcsim/etr.h"
#include "dcsim/rrip.h"
#include "dcsim/ship.h"

namespace dcsim {

namespace {

struct key_default {
    const char* key;
    const char* value;
};

// Order here is the dump order.
constexpr key_default defaults[] = {
    {"cache.capacity", "2GB"},
    {"cache.line", "64"},
    {"cache.ways", "1"},
    {"cache.region", "4KB"},
    {"cache.memory", "64GB"},
    {"cache.demote_cost", "per_set"},
    {"policy.name", "rrip-aob"},
    {"policy.dwp", "false"},
    {"rrip.rrpv_max", "3"},
    {"rrip.insert_rrpv", "2"},
    {"bypass.install_prob", "0.1"},
    {"bab.leader_sets", "32"},
    {"bab.psel_bits", "10"},
    {"etr.rbt_entries", "128"},
    {"ship.shct_entries", "4096"},
    {"ship.shct_bits", "3"},
    {"ship.shct_init", "1"},
    {"ship.force_install_pct", "2"},
    {"accord.rit_entries", "128"},
    {"accord.pws_bias", "0.85"},
    {"dwp.bits", "3"},
    {"dwp.threads", "8"},
    {"dwp.init", "0"},
    {"run.seed", "1"},
    {"run.trace", ""},
    {"run.gen", ""},
    {"run.analyzers", ""},
    {"run.label", ""},
};

std::pair<std::string, std::string> split_key(const std::string& key)
{
    const auto dot = key.find('.');
    return {key.substr(0, dot), key.substr(dot + 1)};
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

// Stream salts so each policy's random stream is independent of the others.
enum : uint64_t { stream_bypass = 1, stream_bab, stream_random, stream_ship, stream_accord };

} // namespace

run_config::run_config()
{
    for (const auto& d : defaults)
        values_[d.key] = d.value;
}

bool run_config::known_key(const std::string& key)
{
    for (const auto& d : defaults)
        if (key == d.key)
            return true;
    return false;
}

std::vector<std::string> run_config::known_keys()
{
    std::vector<std::string> keys;
    for (const auto& d : defaults)
        keys.emplace_back(d.key);
    return keys;
}

void run_config::set(const std::string& key, const std::string& value)
{
    if (!known_key(key))
        throw config_error("unknown config key '" + key + "'");
    values_[key] = value;
}

void run_config::set_assignment(std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw config_error("expected section.key=value, got '" + std::string(assignment) + "'");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void run_config::load_stream(std::istream& in)
{
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw config_error(std::string("config: ") + e.what());
    }
    for (const auto& [section, body] : tree) {
        if (body.empty())
            throw config_error("config: key '" + section + "' outside a [section]");
        for (const auto& [key, value] : body)
            set(section + "." + key, value.get_value<std::string>());
    }
}

void run_config::load_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file " + path);
    load_stream(in);
}

const std::string& run_config::get(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end())
        throw config_error("unknown config key '" + key + "'");
    return it->second;
}

uint64_t run_config::get_u64(const std::string& key) const
{
    const std::string& v = get(key);
    uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw config_error(key + ": expected an unsigned integer, got '" + v + "'");
    return out;
}

uint64_t run_config::get_size(const std::string& key) const
{
    try {
        return parse_size(get(key));
    } catch (const config_error& e) {
        throw config_error(key + ": " + e.what());
    }
}

double run_config::get_double(const std::string& key) const
{
    const std::string& v = get(key);
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used == v.size())
            return d;
    } catch (const std::exception&) {
    }
    throw config_error(key + ": expected a number, got '" + v + "'");
}

bool run_config::get_bool(const std::string& key) const
{
    const std::string& v = get(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off" || v.empty())
        return false;
    throw config_error(key + ": expected a boolean, got '" + v + "'");
}

cache_geometry run_config::geometry() const
{
    cache_geometry g;
    g.capacity_bytes = get_size("cache.capacity");
    g.line_bytes = get_size("cache.line");
    g.ways = static_cast<unsigned>(get_u64("cache.ways"));
    g.region_bytes = get_size("cache.region");
    g.memory_bytes = get_size("cache.memory");
    g.validate();
    return g;
}

policy_params run_config::params() const
{
    auto narrow8 = [&](const char* key) {
        const uint64_t v = get_u64(key);
        if (v > 255)
            throw config_error(std::string(key) + " out of range");
        return static_cast<uint8_t>(v);
    };
    policy_params p;
    p.rrpv_max = narrow8("rrip.rrpv_max");
    p.insert_rrpv = narrow8("rrip.insert_rrpv");
    p.bypass_install_prob = get_double("bypass.install_prob");
    p.bab_leader_sets = static_cast<unsigned>(get_u64("bab.leader_sets"));
    p.bab_psel_bits = static_cast<unsigned>(get_u64("bab.psel_bits"));
    p.rbt_entries = static_cast<unsigned>(get_u64("etr.rbt_entries"));
    p.shct_entries = static_cast<unsigned>(get_u64("ship.shct_entries"));
    p.shct_bits = static_cast<unsigned>(get_u64("ship.shct_bits"));
    p.shct_init = static_cast<unsigned>(get_u64("ship.shct_init"));
    p.force_install_pct = get_double("ship.force_install_pct");
    p.rit_entries = static_cast<unsigned>(get_u64("accord.rit_entries"));
    p.pws_bias = get_double("accord.pws_bias");
    p.dwp_bits = static_cast<unsigned>(get_u64("dwp.bits"));
    p.dwp_threads = static_cast<unsigned>(get_u64("dwp.threads"));
    p.dwp_init = static_cast<unsigned>(get_u64("dwp.init"));
    p.seed = seed();
    return p;
}

engine_options run_config::engine() const
{
    engine_options o;
    const std::string& cost = get("cache.demote_cost");
    if (cost == "per_set")
        o.demote_cost = demote_billing::per_set;
    else if (cost == "per_way")
        o.demote_cost = demote_billing::per_way;
    else
        throw config_error("cache.demote_cost must be per_set or per_way, got '" + cost + "'");
    o.rrpv_max = params().rrpv_max;
    return o;
}

std::string run_config::dump() const
{
    std::ostringstream out;
    std::string section;
    for (const auto& d : defaults) {
        const auto [s, k] = split_key(d.key);
        if (s != section) {
            if (!section.empty())
                out << '\n';
            out << '[' << s << "]\n";
            section = s;
        }
        out << k << " = " << values_.at(d.key) << '\n';
    }
    return out.str();
}

nlohmann::ordered_json run_config::to_json() const
{
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& d : defaults) {
        const auto [s, k] = split_key(d.key);
        j[s][k] = values_.at(d.key);
    }
    return j;
}

// factory

const std::vector<std::string>& policy_names()
{
    static const std::vector<std::string> names = {"always", "lru2",     "random2", "bypass90",
                                                   "bab",    "rrip2",    "rrip-aob", "etr",
                                                   "ship-aob", "ship-etr", "accord", "accord-aob", "accord-etr"};
    return names;
}

std::unique_ptr<replacement_policy> make_policy(const run_config& config)
{
    const cache_geometry g = config.geometry();
    const policy_params p = config.params();
    const rrip_params rrip{p.rrpv_max, p.insert_rrpv};
    rrip.validate();
    const std::string name = config.policy_name();

    std::unique_ptr<replacement_policy> policy;
    if (name == "always") {
        policy = std::make_unique<always_install_policy>(g);
    } else if (name == "lru2") {
        if (g.ways != 2)
            throw config_error("lru2 requires a 2-way geometry");
        policy = std::make_unique<always_install_policy>(g, "lru2");
    } else if (name == "random2") {
        policy = std::make_unique<random_victim_policy>(g, mix_seed(p.seed, stream_random));
    } else if (name == "bypass90") {
        policy = std::make_unique<bypass90_policy>(g, p.bypass_install_prob, mix_seed(p.seed, stream_bypass));
    } else if (name == "bab") {
        policy = std::make_unique<bab_policy>(g, p, mix_seed(p.seed, stream_bab));
    } else if (name == "rrip2") {
        policy = std::make_unique<rrip2_policy>(g, rrip);
    } else if (name == "rrip-aob") {
        policy = std::make_unique<rrip_aob_policy>(rrip);
    } else if (name == "etr") {
        policy = std::make_unique<etr_policy>(std::make_unique<rrip_aob_policy>(rrip), p.rbt_entries);
    } else if (name == "ship-aob") {
        policy = std::make_unique<ship_aob_policy>(rrip, p, mix_seed(p.seed, stream_ship));
    } else if (name == "ship-etr") {
        policy = std::make_unique<etr_policy>(
            std::make_unique<ship_aob_policy>(rrip, p, mix_seed(p.seed, stream_ship)), p.rbt_entries, "ship-etr");
    } else if (name == "accord") {
        policy = std::make_unique<accord_policy>(g, p, mix_seed(p.seed, stream_accord));
    } else if (name == "accord-aob") {
        policy = std::make_unique<accord_aob_policy>(g, rrip, p, mix_seed(p.seed, stream_accord));
    } else if (name == "accord-etr") {
        policy = std::make_unique<accord_etr_policy>(g, rrip, p, mix_seed(p.seed, stream_accord));
    } else {
        std::string known;
        for (const auto& n : policy_names())
            known += (known.empty() ? "" : ", ") + n;
        throw config_error("unknown policy '" + name + "' (known: " + known + ")");
    }
    if (config.get_bool("policy.dwp"))
        policy = std::make_unique<dwp_policy>(std::move(policy), p);
    return policy;
}

std::unique_ptr<dram_cache> make_cache(const run_config& config)
{
    return std::make_unique<dram_cache>(config.geometry(), make_policy(config), config.engine());
}

} // namespace dcsim
