#include "nullmsg/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nullmsg/cost.hpp"

namespace nullmsg {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

ProcId proc_from_json(const json& j, const Network& net) {
  if (j.is_number_integer()) {
    int p = j.get<int>();
    if (p < 0 || p >= net.n) throw InputError("process index out of range");
    return p;
  }
  return net.index_of(j.get<std::string>());
}

int64_t cents_from_json(const json& j) {
  if (j.is_number_integer()) return j.get<int64_t>() * 100;
  return llround(j.get<double>() * 100.0);
}

}  // namespace

NetworkFile network_from_json_text(const std::string& text) {
  json j = json::parse(text);
  const int n = j.at("n").get<int>();
  std::vector<std::string> names;
  if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
  Network tmp;  // name lookup during channel parsing needs a provisional net
  tmp.n = n;
  tmp.names = names;
  std::vector<std::pair<int, int>> channels;
  for (const json& ch : j.at("channels")) {
    if (ch.size() != 2) throw InputError("channel entries are [from, to]");
    int from = names.empty() ? ch[0].get<int>() : proc_from_json(ch[0], tmp);
    int to = names.empty() ? ch[1].get<int>() : proc_from_json(ch[1], tmp);
    channels.emplace_back(from, to);
  }
  NetworkFile nf;
  nf.net = make_network(n, channels, names);
  if (j.contains("costs")) {
    nf.net.cost_cents.assign(n, std::vector<int64_t>(n, -1));
    for (auto& [key, value] : j.at("costs").items()) {
      auto dash = key.find('-');
      if (dash == std::string::npos) throw InputError("cost keys are \"from-to\"");
      std::string a = key.substr(0, dash), b = key.substr(dash + 1);
      auto resolve = [&](const std::string& s) {
        for (int i = 0; i < n; ++i)
          if (nf.net.names[i] == s) return i;
        return std::stoi(s);
      };
      int from = resolve(a), to = resolve(b);
      if (!nf.net.has_channel(from, to)) throw InputError("cost for missing channel " + key);
      nf.net.cost_cents[from][to] = cents_from_json(value);
    }
    for (ProcId i = 0; i < n; ++i)
      for (ProcId t = 0; t < n; ++t)
        if (nf.net.has_channel(i, t) && nf.net.cost_cents[i][t] < 0)
          throw InputError("cost model must cover every channel");
  }
  if (j.contains("f")) nf.f = j.at("f").get<int>();
  if (j.contains("horizon")) nf.horizon = j.at("horizon").get<int>();
  return nf;
}

NetworkFile load_network(const std::string& name_or_path) {
  if (name_or_path == "net1") return NetworkFile{net1(), 1, 2};
  if (name_or_path == "ocean") {
    CostScenario sc = ocean_scenario();
    return NetworkFile{sc.net, sc.f, sc.horizon};
  }
  return network_from_json_text(read_file(name_or_path));
}

std::string network_to_json(const Network& net, int f, Time horizon) {
  json j;
  j["n"] = net.n;
  j["names"] = net.names;
  json channels = json::array();
  for (ProcId i = 0; i < net.n; ++i)
    for (ProcId k = 0; k < net.n; ++k)
      if (net.has_channel(i, k)) channels.push_back({i, k});
  j["channels"] = channels;
  if (!net.cost_cents.empty()) {
    json costs = json::object();
    for (ProcId i = 0; i < net.n; ++i)
      for (ProcId k = 0; k < net.n; ++k)
        if (net.has_channel(i, k)) {
          int64_t c = net.cost_cents[i][k];
          costs[net.name(i) + "-" + net.name(k)] =
              c % 100 == 0 ? json(c / 100) : json(double(c) / 100.0);
        }
    j["costs"] = costs;
  }
  j["f"] = f;
  j["horizon"] = horizon;
  return j.dump(2);
}

std::string pattern_to_json(const FailurePattern& fp) {
  json arr = json::array();
  for (const auto& e : fp.events) {
    json blocked = json::array();
    for (ProcId p = 0; p < 31; ++p)
      if (e.blocked >> p & 1u) blocked.push_back(p);
    arr.push_back({e.proc, e.time, blocked});
  }
  return arr.dump();
}

FailurePattern pattern_from_json_text(const std::string& text, const Network& net) {
  json arr = json::parse(text);
  FailurePattern fp;
  for (const json& ev : arr) {
    if (ev.size() != 3) throw InputError("pattern entries are [proc, time, [blocked...]]");
    FailureEvent e;
    e.proc = proc_from_json(ev[0], net);
    e.time = ev[1].get<int>();
    for (const json& b : ev[2]) e.blocked |= 1u << proc_from_json(b, net);
    fp.add(e);
  }
  return fp;
}

std::string run_to_json(const Run& r) {
  json j;
  j["vs"] = r.vs;
  j["pattern"] = json::parse(pattern_to_json(r.pattern));
  json sends = json::array();
  for (const Send& s : r.sends) sends.push_back({s.time, s.from, s.to, s.token});
  j["sends"] = sends;
  json actions = json::array();
  for (const ActionRec& a : r.actions) actions.push_back({a.proc, a.index, a.time});
  j["actions"] = actions;
  return j.dump(2);
}

std::string cg_to_json(const CommGraph& cg) {
  json j;
  j["horizon"] = cg.horizon;
  json edges = json::array();
  for (Time t = 0; t < cg.horizon; ++t)
    for (ProcId i = 0; i < cg.n; ++i)
      for (ProcId k = 0; k < cg.n; ++k) {
        if (cg.has_actual(i, t, k)) edges.push_back({i, t, k, t + 1, "actual"});
        if (cg.has_null(i, t, k)) edges.push_back({i, t, k, t + 1, "null"});
      }
  j["edges"] = edges;
  return j.dump(2);
}

CommGraph cg_from_json_text(const std::string& text, const Network& net) {
  json j = json::parse(text);
  CommGraph cg = empty_graph(net.n, j.at("horizon").get<int>());
  for (const json& e : j.at("edges")) {
    if (e.size() != 5) throw InputError("edge entries are [p, t, q, t+1, kind]");
    ProcId from = proc_from_json(e[0], net);
    Time t = e[1].get<int>();
    ProcId to = proc_from_json(e[2], net);
    if (e[3].get<int>() != t + 1) throw InputError("edges must advance one step");
    std::string kind = e[4].get<std::string>();
    if (kind == "local") continue;  // implicit
    if (t < 0 || t >= cg.horizon) throw InputError("edge time outside horizon");
    if (kind == "actual")
      cg.actual_from(from, t) |= 1u << to;
    else if (kind == "null")
      cg.nulls_from(from, t) |= 1u << to;
    else
      throw InputError("unknown edge kind " + kind);
  }
  return cg;
}

CommGraph load_cg(const std::string& path, const Network& net) {
  return cg_from_json_text(read_file(path), net);
}

std::string instance_to_json(const ORInstance& inst) {
  json j;
  j["actors"] = inst.actors;
  j["times"] = inst.times;
  return j.dump(2);
}

ORInstance instance_from_json_text(const std::string& text, const Network& net) {
  json j = json::parse(text);
  ORInstance inst;
  for (const json& a : j.at("actors")) inst.actors.push_back(proc_from_json(a, net));
  inst.times = j.at("times").get<std::vector<Time>>();
  return inst;
}

ORInstance load_instance(const std::string& path, const Network& net) {
  return instance_from_json_text(read_file(path), net);
}

std::string export_dot(const CommGraph& cg, const Network& net, DotOptions opts) {
  std::ostringstream out;
  auto node = [&](ProcId p, Time t) {
    return "\"" + net.name(p) + "@" + std::to_string(t) + "\"";
  };
  out << "digraph cg {\n  rankdir=LR;\n";
  for (Time t = 0; t < cg.horizon; ++t)
    for (ProcId i = 0; i < cg.n; ++i) {
      if (opts.include_local)
        out << "  " << node(i, t) << " -> " << node(i, t + 1) << " [style=dotted];\n";
      for (ProcId k = 0; k < cg.n; ++k) {
        if (cg.has_actual(i, t, k))
          out << "  " << node(i, t) << " -> " << node(k, t + 1) << " [style=solid];\n";
        if (cg.has_null(i, t, k))
          out << "  " << node(i, t) << " -> " << node(k, t + 1) << " [style=dashed];\n";
      }
    }
  out << "}\n";
  return out.str();
}

NodeRef parse_node(const std::string& text, const Network& net) {
  auto at = text.find('@');
  if (at == std::string::npos) throw InputError("nodes are written name@time, e.g. s@0");
  std::string name = text.substr(0, at);
  NodeRef n;
  n.time = std::stoi(text.substr(at + 1));
  bool digits = !name.empty() && name.find_first_not_of("0123456789") == std::string::npos;
  n.proc = digits ? std::stoi(name) : net.index_of(name);
  if (n.proc < 0 || n.proc >= net.n) throw InputError("process out of range in " + text);
  return n;
}

Fact parse_fact(const std::string& text, const Network& net) {
  if (text == "value=1") return Fact::value_is(1);
  if (text == "value=0") return Fact::value_is(0);
  if (text == "not-nice") return Fact::not_nice();
  if (text == "source-faulty") return Fact::source_faulty();
  if (text == "not1-or-faulty" || text == "v!=1-or-source-faulty")
    return Fact::value_not1_or_source_faulty();
  if (text.rfind("action-done:", 0) == 0)
    return Fact::action_done(std::stoi(text.substr(12)));
  if (text.rfind("chain:", 0) == 0) {
    std::string rest = text.substr(6);
    auto arrow = rest.find("->");
    if (arrow == std::string::npos) throw InputError("chain facts are chain:a@t->b@t'");
    return Fact::chain(parse_node(rest.substr(0, arrow), net),
                       parse_node(rest.substr(arrow + 2), net));
  }
  throw InputError("unknown fact " + text +
                   " (value=0|1, not-nice, chain:a@t->b@t', action-done:h, source-faulty, "
                   "not1-or-faulty)");
}

std::unique_ptr<Protocol> make_protocol(const std::string& spec, const Network& net, int f) {
  if (spec == "p1") return make_p1();
  if (spec == "p2") return make_p2();
  if (spec == "silent") return make_silent();
  if (spec == "flood") return make_flood();
  if (spec.rfind("nbm:", 0) == 0) return synth_nbm(net, load_cg(spec.substr(4), net));
  if (spec.rfind("rbm:", 0) == 0) return synth_rbm(net, load_cg(spec.substr(4), net), f);
  if (spec.rfind("or:", 0) == 0) {
    std::string rest = spec.substr(3);
    auto comma = rest.find(',');
    if (comma == std::string::npos) throw InputError("or protocols are or:<cg.json>,<inst.json>");
    CommGraph cg = load_cg(rest.substr(0, comma), net);
    ORInstance inst = load_instance(rest.substr(comma + 1), net);
    return synth_or(net, cg, inst);
  }
  throw InputError("unknown protocol " + spec +
                   " (p1, p2, silent, flood, nbm:<cg>, rbm:<cg>, or:<cg>,<inst>)");
}

std::string protocol_descriptor_json(const SynthesizedProtocol& proto) {
  json j;
  switch (proto.family()) {
    case SynthesizedProtocol::Family::Nbm:
      j["family"] = "nbm";
      break;
    case SynthesizedProtocol::Family::Rbm:
      j["family"] = "rbm";
      break;
    case SynthesizedProtocol::Family::Or:
      j["family"] = "or";
      break;
  }
  j["horizon"] = proto.target().horizon;
  j["target"] = json::parse(cg_to_json(proto.target()));
  if (proto.instance()) j["instance"] = json::parse(instance_to_json(*proto.instance()));
  return j.dump(2);
}

}  // namespace nullmsg
