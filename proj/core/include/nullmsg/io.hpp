#pragma once

#include <memory>
#include <string>

#include "nullmsg/knowledge.hpp"
#include "nullmsg/synth.hpp"

namespace nullmsg {

struct NetworkFile {
  Network net;
  int f = 1;
  Time horizon = 2;
};

/// Loads {"n", "names", "channels", "costs"?, "f", "horizon"} from a JSON
/// file, or one of the builtin names net1 / ocean.
NetworkFile load_network(const std::string& name_or_path);
NetworkFile network_from_json_text(const std::string& text);
std::string network_to_json(const Network& net, int f, Time horizon);

std::string run_to_json(const Run& r);

/// {"horizon", "edges": [[p,t,q,t+1,kind]]}; local edges are implicit and
/// ignored on load.
std::string cg_to_json(const CommGraph& cg);
CommGraph cg_from_json_text(const std::string& text, const Network& net);
CommGraph load_cg(const std::string& path, const Network& net);

std::string instance_to_json(const ORInstance& inst);
ORInstance instance_from_json_text(const std::string& text, const Network& net);
ORInstance load_instance(const std::string& path, const Network& net);

struct DotOptions {
  bool include_local = false;
};

/// Graphviz export: solid arrows for actual messages, dashed for null
/// messages, dotted local edges behind a flag. Output ordering is stable.
std::string export_dot(const CommGraph& cg, const Network& net, DotOptions opts = {});

/// [[proc, time, [blocked...]], ...]; processes by index or name.
FailurePattern pattern_from_json_text(const std::string& text, const Network& net);
std::string pattern_to_json(const FailurePattern& fp);

NodeRef parse_node(const std::string& text, const Network& net);
Fact parse_fact(const std::string& text, const Network& net);

/// p1 | p2 | silent | flood | nbm:<cg.json> | rbm:<cg.json> | or:<cg.json>,<inst.json>
std::unique_ptr<Protocol> make_protocol(const std::string& spec, const Network& net, int f);

std::string protocol_descriptor_json(const SynthesizedProtocol& proto);

std::string read_file(const std::string& path);

}  // namespace nullmsg
