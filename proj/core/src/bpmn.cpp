#include "bpcc/bpmn.hpp"

#include "bpcc/errors.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace bpcc {

namespace pt = boost::property_tree;

const char* element_kind_name(ElementKind k) {
  switch (k) {
    case ElementKind::StartEvent: return "start-event";
    case ElementKind::EndEvent: return "end-event";
    case ElementKind::IntermediateEvent: return "intermediate-event";
    case ElementKind::Task: return "task";
    case ElementKind::Subprocess: return "subprocess";
    case ElementKind::ExclusiveGateway: return "exclusive-gateway";
    case ElementKind::InclusiveGateway: return "inclusive-gateway";
    case ElementKind::ParallelGateway: return "parallel-gateway";
  }
  return "?";
}

const char* event_dimension_name(EventDimension d) {
  switch (d) {
    case EventDimension::None: return "none";
    case EventDimension::Message: return "message";
    case EventDimension::Timer: return "timer";
    case EventDimension::Conditional: return "conditional";
    case EventDimension::Signal: return "signal";
    case EventDimension::Terminate: return "terminate";
  }
  return "?";
}

namespace {

ElementKind element_kind_from_name(const std::string& s) {
  if (s == "start-event") return ElementKind::StartEvent;
  if (s == "end-event") return ElementKind::EndEvent;
  if (s == "intermediate-event") return ElementKind::IntermediateEvent;
  if (s == "task") return ElementKind::Task;
  if (s == "subprocess") return ElementKind::Subprocess;
  if (s == "exclusive-gateway") return ElementKind::ExclusiveGateway;
  if (s == "inclusive-gateway") return ElementKind::InclusiveGateway;
  if (s == "parallel-gateway") return ElementKind::ParallelGateway;
  fail(Errc::ConfigInvalid, "unknown element kind: " + s);
}

EventDimension event_dimension_from_name(const std::string& s) {
  if (s == "none") return EventDimension::None;
  if (s == "message") return EventDimension::Message;
  if (s == "timer") return EventDimension::Timer;
  if (s == "conditional") return EventDimension::Conditional;
  if (s == "signal") return EventDimension::Signal;
  if (s == "terminate") return EventDimension::Terminate;
  fail(Errc::ConfigInvalid, "unknown event dimension: " + s);
}

std::string local_name(const std::string& qualified) {
  auto pos = qualified.rfind(':');
  return pos == std::string::npos ? qualified : qualified.substr(pos + 1);
}

std::string attr(const pt::ptree& node, const std::string& name, const std::string& fallback = "") {
  return node.get<std::string>("<xmlattr>." + name, fallback);
}

EventDimension event_dimension_of(const pt::ptree& node) {
  for (const auto& [tag, child] : node) {
    const std::string t = local_name(tag);
    if (t == "messageEventDefinition") return EventDimension::Message;
    if (t == "timerEventDefinition") return EventDimension::Timer;
    if (t == "conditionalEventDefinition") return EventDimension::Conditional;
    if (t == "signalEventDefinition") return EventDimension::Signal;
    if (t == "terminateEventDefinition") return EventDimension::Terminate;
  }
  return EventDimension::None;
}

bool has_loop_characteristics(const pt::ptree& node) {
  for (const auto& [tag, child] : node) {
    const std::string t = local_name(tag);
    if (t == "standardLoopCharacteristics" || t == "multiInstanceLoopCharacteristics") return true;
  }
  return false;
}

// Flow-node tags outside Fig. 4.1's supported set.
bool is_known_unsupported(const std::string& t) {
  return t == "complexGateway" || t == "eventBasedGateway" || t == "callActivity" ||
         t == "transaction" || t == "adHocSubProcess" || t == "choreographyTask";
}

} // namespace

const BpmnElement* BpmnModel::find(const std::string& id) const {
  for (const auto& e : elements)
    if (e.id == id) return &e;
  return nullptr;
}

const BpmnElement& BpmnModel::at(const std::string& id) const {
  const BpmnElement* e = find(id);
  if (!e) fail(Errc::DanglingFlow, "unknown element id: " + id);
  return *e;
}

const Flow* BpmnModel::find_flow(const std::string& id) const {
  for (const auto& f : flows)
    if (f.id == id) return &f;
  return nullptr;
}

std::vector<const Flow*> BpmnModel::out_flows(const std::string& id) const {
  std::vector<const Flow*> out;
  for (const auto& f : flows)
    if (f.source == id) out.push_back(&f);
  return out;
}

std::vector<const Flow*> BpmnModel::in_flows(const std::string& id) const {
  std::vector<const Flow*> in;
  for (const auto& f : flows)
    if (f.target == id) in.push_back(&f);
  return in;
}

void BpmnModel::validate() const {
  for (const auto& f : flows) {
    const BpmnElement* src = find(f.source);
    const BpmnElement* dst = find(f.target);
    if (!src || !dst)
      fail(Errc::DanglingFlow, "flow " + f.id + " references missing element '" +
                                   (src ? f.target : f.source) + "'");
    if (f.kind == FlowKind::Message && src->pool == dst->pool)
      fail(Errc::ConfigInvalid, "message flow " + f.id + " does not cross pools");
    if (f.kind == FlowKind::Sequence && src->pool != dst->pool)
      fail(Errc::ConfigInvalid, "sequence flow " + f.id + " crosses pools " + src->pool + " -> " +
                                    dst->pool);
  }
}

nlohmann::json BpmnModel::to_json() const {
  nlohmann::json j;
  j["elements"] = nlohmann::json::array();
  for (const auto& e : elements) {
    nlohmann::json je;
    je["id"] = e.id;
    je["name"] = e.name;
    je["kind"] = element_kind_name(e.kind);
    je["pool"] = e.pool;
    if (e.lane) je["lane"] = *e.lane;
    je["dimension"] = event_dimension_name(e.dimension);
    if (e.boundary) {
      je["boundary"] = {{"attached_to", e.boundary->attached_to},
                        {"interrupting", e.boundary->interrupting},
                        {"label", e.boundary->label}};
    }
    j["elements"].push_back(je);
  }
  j["flows"] = nlohmann::json::array();
  for (const auto& f : flows) {
    nlohmann::json jf;
    jf["id"] = f.id;
    jf["kind"] = f.kind == FlowKind::Sequence ? "sequence" : "message";
    jf["source"] = f.source;
    jf["target"] = f.target;
    if (f.guard) jf["guard"] = f.guard->text();
    if (f.payload_schema) jf["payload_schema"] = *f.payload_schema;
    j["flows"].push_back(jf);
  }
  j["actors"] = actors;
  j["task_bindings"] = task_bindings;
  j["payload_schemas"] = payload_schemas;
  return j;
}

BpmnModel BpmnModel::from_json(const nlohmann::json& j) {
  BpmnModel m;
  for (const auto& je : j.at("elements")) {
    BpmnElement e;
    e.id = je.at("id").get<std::string>();
    e.name = je.value("name", e.id);
    e.kind = element_kind_from_name(je.at("kind").get<std::string>());
    e.pool = je.at("pool").get<std::string>();
    if (je.contains("lane")) e.lane = je.at("lane").get<std::string>();
    e.dimension = event_dimension_from_name(je.value("dimension", "none"));
    if (je.contains("boundary")) {
      Boundary b;
      b.attached_to = je.at("boundary").at("attached_to").get<std::string>();
      b.interrupting = je.at("boundary").at("interrupting").get<bool>();
      b.label = je.at("boundary").at("label").get<std::string>();
      e.boundary = b;
    }
    m.elements.push_back(std::move(e));
  }
  for (const auto& jf : j.at("flows")) {
    Flow f;
    f.id = jf.at("id").get<std::string>();
    f.kind = jf.at("kind").get<std::string>() == "message" ? FlowKind::Message : FlowKind::Sequence;
    f.source = jf.at("source").get<std::string>();
    f.target = jf.at("target").get<std::string>();
    if (jf.contains("guard")) f.guard = GuardExpr::parse(jf.at("guard").get<std::string>());
    if (jf.contains("payload_schema")) f.payload_schema = jf.at("payload_schema").get<std::string>();
    m.flows.push_back(std::move(f));
  }
  m.actors = j.at("actors").get<std::vector<std::string>>();
  if (j.contains("task_bindings"))
    m.task_bindings = j.at("task_bindings").get<std::map<std::string, std::string>>();
  if (j.contains("payload_schemas"))
    for (auto& [k, v] : j.at("payload_schemas").items()) m.payload_schemas[k] = v;
  m.validate();
  return m;
}

BpmnModel parse_bpmn(const std::string& xml_text) {
  pt::ptree tree;
  std::istringstream in(xml_text);
  try {
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    fail(Errc::XmlMalformed, e.what());
  }

  const pt::ptree* defs = nullptr;
  for (const auto& [tag, child] : tree) {
    if (local_name(tag) == "definitions") {
      defs = &child;
      break;
    }
  }
  if (!defs) fail(Errc::XmlMalformed, "no <definitions> root element");

  BpmnModel model;
  std::map<std::string, std::string> process_pool; // process id -> participant id

  // Pass 1: collaboration gives pools and message flows.
  for (const auto& [tag, node] : *defs) {
    if (local_name(tag) != "collaboration") continue;
    for (const auto& [ctag, cnode] : node) {
      const std::string t = local_name(ctag);
      if (t == "participant") {
        std::string pid = attr(cnode, "id");
        std::string pname = attr(cnode, "name", pid);
        std::string pref = attr(cnode, "processRef");
        model.actors.push_back(pname);
        if (!pref.empty()) process_pool[pref] = pname;
      } else if (t == "messageFlow") {
        Flow f;
        f.id = attr(cnode, "id");
        f.kind = FlowKind::Message;
        f.source = attr(cnode, "sourceRef");
        f.target = attr(cnode, "targetRef");
        model.flows.push_back(std::move(f));
      }
    }
  }

  // Pass 2: processes give flow nodes and sequence flows.
  for (const auto& [tag, node] : *defs) {
    if (local_name(tag) != "process") continue;
    std::string proc_id = attr(node, "id");
    std::string pool = process_pool.count(proc_id) ? process_pool[proc_id]
                                                   : attr(node, "name", proc_id);
    if (!process_pool.count(proc_id)) model.actors.push_back(pool);

    std::map<std::string, std::string> lane_of; // flowNodeRef -> lane name

    for (const auto& [etag, enode] : node) {
      const std::string t = local_name(etag);
      if (t == "<xmlattr>") continue;
      if (t == "laneSet") {
        for (const auto& [ltag, lnode] : enode) {
          if (local_name(ltag) != "lane") continue;
          std::string lname = attr(lnode, "name", attr(lnode, "id"));
          for (const auto& [rtag, rnode] : lnode)
            if (local_name(rtag) == "flowNodeRef") lane_of[rnode.get_value<std::string>()] = lname;
        }
        continue;
      }
      if (t == "sequenceFlow") {
        Flow f;
        f.id = attr(enode, "id");
        f.kind = FlowKind::Sequence;
        f.source = attr(enode, "sourceRef");
        f.target = attr(enode, "targetRef");
        for (const auto& [ftag, fnode] : enode)
          if (local_name(ftag) == "conditionExpression")
            f.guard = GuardExpr::parse(fnode.get_value<std::string>());
        model.flows.push_back(std::move(f));
        continue;
      }

      BpmnElement e;
      e.id = attr(enode, "id");
      e.name = attr(enode, "name", e.id);
      e.pool = pool;
      e.dimension = event_dimension_of(enode);

      if (t == "startEvent") {
        e.kind = ElementKind::StartEvent;
      } else if (t == "endEvent") {
        e.kind = ElementKind::EndEvent;
      } else if (t == "intermediateCatchEvent" || t == "intermediateThrowEvent") {
        e.kind = ElementKind::IntermediateEvent;
      } else if (t == "boundaryEvent") {
        e.kind = ElementKind::IntermediateEvent;
        Boundary b;
        b.attached_to = attr(enode, "attachedToRef");
        b.interrupting = attr(enode, "cancelActivity", "true") != "false";
        b.label = attr(enode, "label", e.name);
        e.boundary = b;
      } else if (t == "task" || t == "sendTask" || t == "receiveTask" || t == "userTask" ||
                 t == "serviceTask" || t == "scriptTask" || t == "manualTask" ||
                 t == "businessRuleTask") {
        e.kind = ElementKind::Task;
      } else if (t == "subProcess") {
        if (has_loop_characteristics(enode))
          fail(Errc::LoopingConstructUnsupported, "looping subprocess " + e.id);
        e.kind = ElementKind::Subprocess;
      } else if (t == "exclusiveGateway") {
        e.kind = ElementKind::ExclusiveGateway;
      } else if (t == "inclusiveGateway") {
        e.kind = ElementKind::InclusiveGateway;
      } else if (t == "parallelGateway") {
        e.kind = ElementKind::ParallelGateway;
      } else if (is_known_unsupported(t)) {
        fail(Errc::UnsupportedElement, t + " '" + e.id + "' is outside the supported symbol set");
      } else {
        // Artifacts (dataObject, textAnnotation, association, ...) carry no
        // flow control and are skipped.
        continue;
      }
      if (lane_of.count(e.id)) e.lane = lane_of[e.id];
      model.elements.push_back(std::move(e));
    }
  }

  // Lanes arrive after elements when laneSet follows the nodes; resolve again.
  model.validate();
  return model;
}

BpmnModel parse_bpmn_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ConfigInvalid, "cannot open model file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_bpmn(ss.str());
}

namespace {

int out_degree(const BpmnModel& m, const std::string& id) {
  int n = 0;
  for (const auto& f : m.flows)
    if (f.source == id) ++n;
  return n;
}

int in_degree(const BpmnModel& m, const std::string& id) {
  int n = 0;
  for (const auto& f : m.flows)
    if (f.target == id) ++n;
  return n;
}

} // namespace

BpmnModel normalize(const BpmnModel& input, const AnnotationConfig& ann) {
  BpmnModel m = input;

  // Boundary begin (throwing) events: represent by an inclusive gateway on the
  // incoming edge of the activity that carries them.
  for (const std::string& ev_id : ann.boundary_begins) {
    const BpmnElement* ev = m.find(ev_id);
    if (!ev || !ev->boundary)
      fail(Errc::MissingAnnotation, "boundary begin '" + ev_id + "' is not a boundary event");
    const std::string activity = ev->boundary->attached_to;
    std::vector<Flow*> incoming;
    for (auto& f : m.flows)
      if (f.target == activity) incoming.push_back(&f);
    if (incoming.size() != 1)
      fail(Errc::ConfigInvalid, "activity " + activity + " needs exactly one incoming edge");
    BpmnElement gw;
    gw.id = "gw_bnd_" + ev_id;
    gw.name = gw.id;
    gw.kind = ElementKind::InclusiveGateway;
    gw.pool = m.at(activity).pool;
    m.elements.push_back(gw);
    incoming[0]->target = gw.id;
    Flow to_activity{gw.id + "_to_" + activity, FlowKind::Sequence, gw.id, activity,
                     GuardExpr::literal(true), std::nullopt};
    Flow to_event{gw.id + "_to_" + ev_id, FlowKind::Sequence, gw.id, ev_id,
                  GuardExpr::literal(true), std::nullopt};
    m.flows.push_back(to_activity);
    m.flows.push_back(to_event);
  }

  // Boundary catch events: wire the explicit edge from the labeled throw event.
  for (const auto& e : m.elements) {
    if (!e.boundary || ann.boundary_begins.count(e.id)) continue;
    auto it = ann.boundary_throws.find(e.boundary->label);
    if (it == ann.boundary_throws.end())
      fail(Errc::UnmatchedBoundaryLabel, "no throw event for label '" + e.boundary->label + "'");
    if (!m.find(it->second))
      fail(Errc::UnmatchedBoundaryLabel, "throw element '" + it->second + "' not in model");
    bool exists = false;
    for (const auto& f : m.flows)
      if (f.source == it->second && f.target == e.id) exists = true;
    if (!exists) {
      Flow f{"bnd_" + e.boundary->label, FlowKind::Sequence, it->second, e.id, std::nullopt,
             std::nullopt};
      if (m.at(it->second).pool != e.pool) f.kind = FlowKind::Message;
      m.flows.push_back(f);
    }
  }

  // Parallel gateways are a special case of inclusive gateways with all
  // guards literal-true.
  for (auto& e : m.elements) {
    if (e.kind == ElementKind::ParallelGateway) {
      e.kind = ElementKind::InclusiveGateway;
      for (auto& f : m.flows)
        if (f.source == e.id) f.guard = GuardExpr::literal(true);
    }
  }

  // Guards from annotations.
  for (auto& f : m.flows) {
    auto it = ann.guards.find(f.id);
    if (it != ann.guards.end()) f.guard = GuardExpr::parse(it->second);
    auto sit = ann.payload_schemas.find(f.id);
    if (sit != ann.payload_schemas.end()) {
      f.payload_schema = f.id;
      m.payload_schemas[f.id] = sit->second;
    }
  }

  // Split any gateway that is both a join and a fork into a merge gateway
  // followed by a fork gateway joined by one edge.
  {
    std::vector<BpmnElement> added;
    for (auto& e : m.elements) {
      if (!e.is_gateway()) continue;
      if (in_degree(m, e.id) > 1 && out_degree(m, e.id) > 1) {
        BpmnElement fork = e;
        fork.id = e.id + "_fork";
        fork.name = e.name + " (fork)";
        for (auto& f : m.flows)
          if (f.source == e.id) f.source = fork.id;
        Flow link{e.id + "_link", FlowKind::Sequence, e.id, fork.id, std::nullopt, std::nullopt};
        m.flows.push_back(link);
        added.push_back(std::move(fork));
      }
    }
    for (auto& e : added) m.elements.push_back(std::move(e));
  }

  // Every fork edge carries a guard; forks must be gateways. Exclusive fork
  // guards are checked syntactically for literal overlap only.
  for (const auto& e : m.elements) {
    if (out_degree(m, e.id) < 2) continue;
    if (!e.is_gateway())
      fail(Errc::ConfigInvalid, "element " + e.id + " has multiple outgoing flows but is not a gateway");
    std::vector<std::string> guard_texts;
    for (auto& f : m.flows) {
      if (f.source != e.id) continue;
      if (!f.guard) fail(Errc::MissingAnnotation, "flow " + f.id + " needs a guard");
      guard_texts.push_back(f.guard->text());
    }
    if (e.kind == ElementKind::ExclusiveGateway) {
      std::sort(guard_texts.begin(), guard_texts.end());
      if (std::adjacent_find(guard_texts.begin(), guard_texts.end()) != guard_texts.end())
        fail(Errc::ConfigInvalid, "exclusive gateway " + e.id + " has literally overlapping guards");
    }
  }

  // Task script bindings.
  for (const auto& [task, script] : ann.task_scripts) {
    if (!m.find(task)) fail(Errc::MissingAnnotation, "task binding for unknown element " + task);
    m.task_bindings[task] = script;
  }

  m.validate();
  return m;
}

} // namespace bpcc
