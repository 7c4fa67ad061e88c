#include "dam/mechanism_io.h"

#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "dam/errors.h"
#include "json.hpp"

namespace dam {

using nlohmann::json;

namespace {

Rational read_rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      throw InvalidMechanism(where + ": " + e.what());
    }
  }
  throw InvalidMechanism(where + ": expected an integer or a \"p/q\" string");
}

json write_rational(const Rational& r) {
  if (r.denominator() == 1) return r.numerator();
  return to_string(r);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InvalidMechanism(where + ": missing \"" + key + "\"");
  }
  return obj.at(key);
}

std::string read_string(const json& j, const std::string& where) {
  if (!j.is_string() || j.get<std::string>().empty()) {
    throw InvalidMechanism(where + ": expected a non-empty string");
  }
  return j.get<std::string>();
}

std::vector<std::string> read_names(const json& obj, const std::string& where) {
  std::vector<std::string> names;
  if (!obj.contains("names")) return names;
  const json& arr = obj.at("names");
  if (!arr.is_array()) throw InvalidMechanism(where + ": names must be a list");
  for (const auto& n : arr) names.push_back(read_string(n, where + " name"));
  return names;
}

Mechanism build(const json& doc) {
  if (!doc.is_object()) throw InvalidMechanism("top level must be an object");
  Mechanism m;
  MarketNetwork& net = m.network;

  const json& sellers = field(doc, "sellers", "mechanism");
  const json& buyers = field(doc, "buyers", "mechanism");
  if (!sellers.is_array() || !buyers.is_array()) {
    throw InvalidMechanism("sellers and buyers must be lists");
  }

  try {
    for (const auto& s : sellers) {
      const std::string id = read_string(field(s, "id", "seller"), "seller id");
      net.add_seller(id, read_names(s, "seller '" + id + "'"),
                     read_rational(field(s, "budget", id), id + " budget"));
    }
    for (const auto& b : buyers) {
      const std::string id = read_string(field(b, "id", "buyer"), "buyer id");
      net.add_buyer(id, read_names(b, "buyer '" + id + "'"),
                    read_rational(field(b, "budget", id), id + " budget"),
                    read_rational(field(b, "valuation", id), id + " valuation"));
    }
  } catch (const InvalidMechanism&) {
    throw;
  } catch (const Error& e) {
    throw InvalidMechanism(e.what());
  }

  for (const auto& b : buyers) {
    if (!b.contains("incentives")) continue;
    const std::string id = b.at("id").get<std::string>();
    const json& inc = b.at("incentives");
    if (!inc.is_object()) {
      throw InvalidMechanism("buyer '" + id + "': incentives must be an object");
    }
    const AgentIndex buyer = *net.find_id(id);
    for (const auto& [seller_id, amount] : inc.items()) {
      const auto seller = net.find_id(seller_id);
      if (!seller || !net.is_seller(*seller)) {
        throw InvalidMechanism("buyer '" + id + "': unknown seller '" +
                               seller_id + "' in incentives");
      }
      net.set_incentive(buyer, *seller,
                        read_rational(amount, "I(" + id + ", " + seller_id + ")"));
    }
  }

  const json& edges = field(doc, "edges", "mechanism");
  if (!edges.is_array()) throw InvalidMechanism("edges must be a list");
  std::set<std::pair<AgentIndex, AgentIndex>> seen;
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2) {
      throw InvalidMechanism("each edge must be a pair of agent ids");
    }
    const std::string a = read_string(e[0], "edge endpoint");
    const std::string b = read_string(e[1], "edge endpoint");
    const auto ia = net.find_id(a);
    const auto ib = net.find_id(b);
    if (!ia || !ib) {
      throw InvalidMechanism("edge [" + a + ", " + b + "] names an unknown agent");
    }
    if (seen.contains({*ia, *ib}) || seen.contains({*ib, *ia})) {
      throw InvalidMechanism("edge [" + a + ", " + b + "] listed twice");
    }
    seen.emplace(*ia, *ib);
    net.add_edge(*ia, *ib);
  }

  std::string rule = "smf";
  if (doc.contains("rule")) rule = read_string(doc.at("rule"), "rule");
  try {
    m.rule = find_rule(rule);
  } catch (const Error& e) {
    throw InvalidMechanism(e.what());
  }

  const auto problems = validate_mechanism(m);
  if (!problems.empty()) {
    std::string msg = "invalid mechanism:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw InvalidMechanism(msg);
  }
  return m;
}

}  // namespace

Mechanism parse_mechanism(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidMechanism(std::string("malformed JSON: ") + e.what());
  }
  try {
    return build(doc);
  } catch (const json::exception& e) {
    throw InvalidMechanism(std::string("unexpected JSON shape: ") + e.what());
  }
}

Mechanism load_mechanism(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidMechanism("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_mechanism(buf.str());
}

std::string format_mechanism(const Mechanism& m) {
  const MarketNetwork& net = m.network;
  json doc;
  doc["sellers"] = json::array();
  doc["buyers"] = json::array();
  for (AgentIndex s : net.sellers()) {
    const Agent& a = net.agent(s);
    doc["sellers"].push_back(
        {{"id", a.id}, {"names", a.names}, {"budget", write_rational(net.budget(s))}});
  }
  for (AgentIndex b : net.buyers()) {
    const Agent& a = net.agent(b);
    json inc = json::object();
    for (AgentIndex s : net.sellers()) {
      if (net.incentive(b, s) != 0) {
        inc[net.agent(s).id] = write_rational(net.incentive(b, s));
      }
    }
    doc["buyers"].push_back({{"id", a.id},
                             {"names", a.names},
                             {"budget", write_rational(net.budget(b))},
                             {"valuation", write_rational(a.valuation)},
                             {"incentives", inc}});
  }
  doc["edges"] = json::array();
  for (AgentIndex a = 0; a < net.size(); ++a) {
    for (AgentIndex b = a; b < net.size(); ++b) {
      if (net.friends(a, b)) {
        doc["edges"].push_back({net.agent(a).id, net.agent(b).id});
      }
    }
  }
  doc["rule"] = m.rule ? std::string(m.rule->name()) : "smf";
  return doc.dump(2) + "\n";
}

void save_mechanism(const std::string& path, const Mechanism& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << format_mechanism(m);
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace dam
