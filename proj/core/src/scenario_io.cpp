#include "morpho/scenario_io.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <system_error>

#include "morpho/dynamics.hpp"
#include "morpho/errors.hpp"

namespace morpho {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double deg_to_rad(double d) { return d * kDegToRad; }

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Shortest decimal whose conversion lands exactly on `rad`, so that angles
// survive a parse/serialize cycle bit for bit.
std::string degrees_text(double rad) {
  const double guess = rad * kRadToDeg;
  std::string best = shortest(guess);
  bool exact = deg_to_rad(guess) == rad;
  double up = guess;
  double down = guess;
  for (int i = 0; i < 64; ++i) {
    up = std::nextafter(up, std::numeric_limits<double>::infinity());
    down = std::nextafter(down, -std::numeric_limits<double>::infinity());
    for (double c : {up, down}) {
      if (deg_to_rad(c) != rad) continue;
      std::string s = shortest(c);
      if (!exact || s.size() < best.size()) best = std::move(s);
      exact = true;
    }
  }
  return best;
}

int line_of(const YAML::Node& n) {
  const YAML::Mark m = n.Mark();
  return m.line >= 0 ? m.line + 1 : 0;
}

[[noreturn]] void fail(const std::string& field, const YAML::Node& n,
                       const std::string& what) {
  const int line = n ? line_of(n) : 0;
  std::string msg = field + ": " + what;
  if (line > 0) msg = "line " + std::to_string(line) + ": " + msg;
  throw ParseError(msg, field, line);
}

// A mapping whose keys are claimed one by one; leftovers are unknown keys.
class Section {
 public:
  Section(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_.IsDefined() && !node_.IsNull() && !node_.IsMap()) {
      fail(path_, node_, "expected a mapping");
    }
  }

  std::optional<YAML::Node> get(const std::string& key) {
    seen_.insert(key);
    if (!node_.IsDefined() || !node_.IsMap()) return std::nullopt;
    const YAML::Node& cnode = node_;
    YAML::Node v = cnode[key];
    if (!v.IsDefined()) return std::nullopt;
    return v;
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    if (!node_.IsDefined() || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.Scalar();
      if (!seen_.count(key)) fail(field(key), kv.first, "unknown key");
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

double to_double(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) fail(field, n, "expected a number");
  const std::string& s = n.Scalar();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    fail(field, n, "expected a number, got '" + s + "'");
  }
  return v;
}

long long to_integer(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) fail(field, n, "expected an integer");
  const std::string& s = n.Scalar();
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    fail(field, n, "expected an integer, got '" + s + "'");
  }
  return v;
}

std::vector<double> to_list(const YAML::Node& n, const std::string& field,
                            std::size_t size) {
  if (!n.IsSequence() || n.size() != size) {
    fail(field, n, "expected a list of " + std::to_string(size) + " numbers");
  }
  std::vector<double> out;
  for (const auto& item : n) out.push_back(to_double(item, field));
  return out;
}

void read(Section& s, const std::string& key, double& out) {
  if (auto n = s.get(key)) out = to_double(*n, s.field(key));
}

void read_deg(Section& s, const std::string& key, double& out_rad) {
  if (auto n = s.get(key)) out_rad = deg_to_rad(to_double(*n, s.field(key)));
}

void read(Section& s, const std::string& key, int& out) {
  if (auto n = s.get(key)) {
    const long long v = to_integer(*n, s.field(key));
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      fail(s.field(key), *n, "integer out of range");
    }
    out = static_cast<int>(v);
  }
}

void read(Section& s, const std::string& key, bool& out) {
  if (auto n = s.get(key)) {
    const std::string& v = n->IsScalar() ? n->Scalar() : std::string();
    if (v == "true") {
      out = true;
    } else if (v == "false") {
      out = false;
    } else {
      fail(s.field(key), *n, "expected true or false");
    }
  }
}

void read(Section& s, const std::string& key, std::string& out) {
  if (auto n = s.get(key)) {
    if (!n->IsScalar()) fail(s.field(key), *n, "expected a string");
    out = n->Scalar();
  }
}

// Fixed-size slice of a vector; `scale` converts file units to internal ones.
template <typename Vec>
void read_segment(Section& s, const std::string& key, Vec& v, int offset, int size,
                  bool degrees = false) {
  if (auto n = s.get(key)) {
    const auto values = to_list(*n, s.field(key), static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) {
      v[offset + i] = degrees ? deg_to_rad(values[i]) : values[i];
    }
  }
}

void read_pair(Section& s, const std::string& key, double& lo, double& hi,
               bool degrees = false) {
  if (auto n = s.get(key)) {
    const auto v = to_list(*n, s.field(key), 2);
    lo = degrees ? deg_to_rad(v[0]) : v[0];
    hi = degrees ? deg_to_rad(v[1]) : v[1];
  }
}

template <typename E>
void read_enum(Section& s, const std::string& key, E& out,
               std::initializer_list<std::pair<const char*, E>> names) {
  auto n = s.get(key);
  if (!n) return;
  const std::string v = n->IsScalar() ? n->Scalar() : std::string();
  std::string allowed;
  for (const auto& [name, value] : names) {
    if (v == name) {
      out = value;
      return;
    }
    allowed += allowed.empty() ? name : std::string(" | ") + name;
  }
  fail(s.field(key), *n, "expected one of " + allowed);
}

const std::initializer_list<std::pair<const char*, ControlMode>> kModes = {
    {"fault_tolerant", ControlMode::kFaultTolerant}, {"agile", ControlMode::kAgile}};
const std::initializer_list<std::pair<const char*, bool>> kActuation = {
    {"full", false}, {"sagittal_only", true}};
const std::initializer_list<std::pair<const char*, YawPolicy>> kYaw = {
    {"free", YawPolicy::kFree}, {"penalized", YawPolicy::kPenalized}};
const std::initializer_list<std::pair<const char*, LoeMode>> kLoe = {
    {"scale", LoeMode::kScale}, {"cap", LoeMode::kCap}};

// Named slices of the state and input vectors as they appear in the file.
struct Slice {
  const char* key;
  int offset;
  int size;
  bool angle;
};

constexpr Slice kStateSlices[] = {
    {"position", sx::kPos, 3, false},        {"attitude", sx::kAtt, 3, true},
    {"sagittal", sx::kSag, 4, true},         {"frontal", sx::kFront, 4, true},
    {"velocity", sx::kVel, 3, false},        {"angular_velocity", sx::kOmega, 3, true},
    {"sagittal_rate", sx::kSagRate, 4, true}, {"frontal_rate", sx::kFrontRate, 4, true},
};

constexpr Slice kInputSlices[] = {
    {"thrust", ux::kThrust, 4, false},
    {"sagittal_accel", ux::kSagAccel, 4, false},
    {"frontal_accel", ux::kFrontAccel, 4, false},
};

// ---------------------------------------------------------------------------
// sections

void parse_robot(const YAML::Node& node, RobotParams& r) {
  Section s(node, "robot");
  read(s, "body_mass", r.body_mass);
  read(s, "leg_mass", r.leg_mass);
  if (auto n = s.get("inertia")) {
    const std::string f = s.field("inertia");
    if (!n->IsSequence() || n->size() != 3) {
      fail(f, *n, "expected 3 diagonal entries or 3 rows of 3");
    }
    if ((*n)[0].IsSequence()) {
      for (int i = 0; i < 3; ++i) {
        const auto row = to_list((*n)[i], f, 3);
        for (int j = 0; j < 3; ++j) r.inertia(i, j) = row[j];
      }
    } else {
      const auto d = to_list(*n, f, 3);
      r.inertia = Eigen::Vector3d(d[0], d[1], d[2]).asDiagonal();
    }
  }
  if (auto n = s.get("hip_offsets")) {
    const std::string f = s.field("hip_offsets");
    if (!n->IsSequence() || n->size() != 4) fail(f, *n, "expected 4 rows of 3");
    for (int i = 0; i < 4; ++i) {
      const auto row = to_list((*n)[i], f, 3);
      r.hip_offsets[i] = Eigen::Vector3d(row[0], row[1], row[2]);
    }
  }
  read(s, "leg_length", r.leg_length);
  read(s, "rotor_moment_gain", r.rotor_moment_gain);
  if (auto n = s.get("rotor_spin_signs")) {
    const auto v = to_list(*n, s.field("rotor_spin_signs"), 4);
    for (int i = 0; i < 4; ++i) r.rotor_spin_signs[i] = v[i];
  }
  read(s, "drag_gamma", r.drag_gamma);
  read(s, "gravity", r.gravity);
  s.finish();
}

void parse_integrator(const YAML::Node& node, IntegratorConfig& c) {
  Section s(node, "integrator");
  read(s, "plant_step", c.plant_step);
  read(s, "prediction_substeps", c.prediction_substeps);
  read(s, "control_period", c.control_period);
  s.finish();
}

void parse_contact(const YAML::Node& node, ContactParams& c) {
  Section s(node, "contact");
  read(s, "stiffness", c.stiffness);
  read(s, "damping", c.damping);
  read(s, "transition_width", c.transition_width);
  read(s, "mu_static", c.mu_static);
  read(s, "mu_dynamic", c.mu_dynamic);
  read(s, "critical_velocity", c.critical_velocity);
  read(s, "wheel_radius", c.wheel_radius);
  s.finish();
}

template <typename Vec, std::size_t N>
void parse_slices(const std::optional<YAML::Node>& node, const std::string& path,
                  Vec& v, const Slice (&slices)[N], bool angles_in_degrees) {
  if (!node) return;
  Section s(*node, path);
  for (const Slice& sl : slices) {
    const bool deg = angles_in_degrees && sl.angle;
    read_segment(s, deg ? std::string(sl.key) + "_deg" : std::string(sl.key), v,
                 sl.offset, sl.size, deg);
  }
  s.finish();
}

void parse_ocp(const YAML::Node& node, OcpConfig& c) {
  Section s(node, "ocp");
  read(s, "horizon", c.horizon);
  read_enum(s, "yaw_policy", c.yaw_policy, kYaw);
  parse_slices(s.get("q_weights"), "ocp.q_weights", c.q_weights, kStateSlices, false);
  parse_slices(s.get("r_weights"), "ocp.r_weights", c.r_weights, kInputSlices, false);
  parse_slices(s.get("input_reference"), "ocp.input_reference", c.input_reference,
               kInputSlices, false);
  read_pair(s, "thrust_bounds", c.thrust_min, c.thrust_max);
  read_pair(s, "joint_accel_bounds", c.joint_accel_min, c.joint_accel_max);
  read_deg(s, "attitude_limit_deg", c.attitude_limit);
  read_pair(s, "joint_bounds_deg", c.joint_min, c.joint_max, true);
  read_deg(s, "side_sum_limit_deg", c.side_sum_limit);
  read(s, "attitude_soft_weight", c.attitude_soft_weight);
  read(s, "joint_soft_weight", c.joint_soft_weight);
  read(s, "side_sum_soft_weight", c.side_sum_soft_weight);
  read(s, "singular_weight", c.singular_weight);
  read(s, "disturbance_gain", c.disturbance_gain);
  read(s, "precondition", c.precondition);
  if (auto n = s.get("solver")) {
    Section so(*n, "ocp.solver");
    BoxMinimizerOptions& o = c.solver;
    read(so, "gradient_tolerance", o.gradient_tolerance);
    read(so, "relative_cost_tolerance", o.relative_cost_tolerance);
    read(so, "max_iterations", o.max_iterations);
    read(so, "memory", o.memory);
    read(so, "armijo_c1", o.armijo_c1);
    read(so, "max_backtracks", o.max_backtracks);
    so.finish();
  }
  s.finish();
}

int rotor_index(const YAML::Node& n, const std::string& field) {
  const long long r = to_integer(n, field);
  if (r < 1 || r > 4) fail(field, n, "rotor must be 1..4");
  return static_cast<int>(r - 1);
}

void parse_faults(const YAML::Node& node, Scenario& sc) {
  Section s(node, "faults");
  read_enum(s, "mode", sc.faults.mode, kLoe);
  if (auto n = s.get("events")) {
    if (!n->IsSequence()) fail("faults.events", *n, "expected a list");
    for (const auto& item : *n) {
      Section e(item, "faults.events");
      auto rotor = e.get("rotor");
      auto time = e.get("time");
      if (!rotor || !time) fail("faults.events", item, "each event needs rotor and time");
      const int r = rotor_index(*rotor, "faults.events.rotor");
      FaultEvent ev;
      ev.start_time = to_double(*time, "faults.events.time");
      read(e, "effectiveness", ev.effectiveness);
      e.finish();
      sc.faults.rotors[r].push_back(ev);
    }
  }
  if (auto n = s.get("randomized")) {
    Section r(*n, "faults.randomized");
    RandomizedFault f;
    if (auto rotor = r.get("rotor")) f.rotor = rotor_index(*rotor, "faults.randomized.rotor");
    read(r, "earliest", f.earliest);
    read(r, "latest", f.latest);
    read(r, "effectiveness", f.effectiveness);
    r.finish();
    sc.randomized_fault = f;
  }
  s.finish();
}

void parse_initial_state(const YAML::Node& node, RomState& x) {
  Section s(node, "scenario.initial_state");
  for (const Slice& sl : kStateSlices) {
    const std::string key = sl.angle ? std::string(sl.key) + "_deg" : std::string(sl.key);
    read_segment(s, key, x, sl.offset, sl.size, sl.angle);
  }
  s.finish();
}

void parse_waypoints(const YAML::Node& node, std::vector<Waypoint>& out) {
  if (!node.IsSequence()) fail("scenario.waypoints", node, "expected a list");
  for (const auto& item : node) {
    Section s(item, "scenario.waypoints");
    Waypoint w;
    auto pos = s.get("position");
    if (!pos) fail("scenario.waypoints", item, "each waypoint needs a position");
    const auto p = to_list(*pos, "scenario.waypoints.position", 3);
    w.position = Eigen::Vector3d(p[0], p[1], p[2]);
    read_deg(s, "yaw_deg", w.yaw);
    read(s, "hold", w.hold);
    s.finish();
    out.push_back(w);
  }
}

void parse_perturbation(const YAML::Node& node, PlantPerturbation& p) {
  Section s(node, "scenario.plant_perturbation");
  read(s, "mass", p.mass);
  read(s, "inertia", p.inertia);
  read(s, "rotor_moment_gain", p.rotor_moment_gain);
  read(s, "drag_gamma", p.drag_gamma);
  s.finish();
}

Scenario parse_document(const YAML::Node& root) {
  if (root.IsDefined() && !root.IsNull() && !root.IsMap()) {
    fail("document", root, "top level must be a mapping");
  }
  Section top(root, "");
  const auto scenario_node = top.get("scenario");
  const auto robot_node = top.get("robot");
  const auto integrator_node = top.get("integrator");
  const auto ocp_node = top.get("ocp");
  const auto faults_node = top.get("faults");
  const auto contact_node = top.get("contact");
  top.finish();

  Scenario sc = default_scenario();
  if (robot_node) parse_robot(*robot_node, sc.robot);

  Section s(scenario_node.value_or(YAML::Node()), "scenario");
  read(s, "name", sc.name);
  read_enum(s, "mode", sc.mode, kModes);
  read_enum(s, "actuation", sc.sagittal_only, kActuation);
  read(s, "duration", sc.duration);
  if (auto n = s.get("seed")) {
    const long long v = to_integer(*n, "scenario.seed");
    if (v < 0) fail("scenario.seed", *n, "must be >= 0");
    sc.seed = static_cast<std::uint64_t>(v);
  }
  read(s, "reference_speed", sc.reference_speed);
  read(s, "waypoint_radius", sc.waypoint_radius);
  read(s, "contact_enabled", sc.contact_enabled);
  if (auto n = s.get("initial_state")) parse_initial_state(*n, sc.initial_state);
  if (auto n = s.get("waypoints")) {
    sc.waypoints.clear();
    parse_waypoints(*n, sc.waypoints);
  } else {
    sc.waypoints = {Waypoint{sc.initial_state.segment<3>(sx::kPos),
                             sc.initial_state[sx::kYaw], 0.0}};
  }
  if (auto n = s.get("plant_perturbation")) parse_perturbation(*n, sc.plant_perturbation);
  s.finish();

  // Controller defaults follow the mode and actuation, then file overrides.
  sc.ocp = sc.mode == ControlMode::kAgile
               ? OcpConfig::agile_defaults(sc.robot)
               : OcpConfig::fault_tolerant_defaults(sc.robot, sc.sagittal_only);
  sc.ocp.sagittal_only = sc.sagittal_only;
  if (ocp_node) parse_ocp(*ocp_node, sc.ocp);
  if (integrator_node) parse_integrator(*integrator_node, sc.integrator);
  if (contact_node) parse_contact(*contact_node, sc.contact);
  if (faults_node) parse_faults(*faults_node, sc);

  sc.validate();
  return sc;
}

// ---------------------------------------------------------------------------
// emission

void num(YAML::Emitter& out, double v) { out << shortest(v); }
void deg(YAML::Emitter& out, double rad) { out << degrees_text(rad); }

template <typename Vec>
void emit_segment(YAML::Emitter& out, const Vec& v, int offset, int size, bool degrees) {
  out << YAML::Flow << YAML::BeginSeq;
  for (int i = 0; i < size; ++i) {
    if (degrees) {
      deg(out, v[offset + i]);
    } else {
      num(out, v[offset + i]);
    }
  }
  out << YAML::EndSeq;
}

template <typename Vec, std::size_t N>
void emit_slices(YAML::Emitter& out, const Vec& v, const Slice (&slices)[N],
                 bool angles_in_degrees) {
  out << YAML::BeginMap;
  for (const Slice& sl : slices) {
    const bool d = angles_in_degrees && sl.angle;
    out << YAML::Key << (d ? std::string(sl.key) + "_deg" : std::string(sl.key))
        << YAML::Value;
    emit_segment(out, v, sl.offset, sl.size, d);
  }
  out << YAML::EndMap;
}

void emit_pair(YAML::Emitter& out, double a, double b, bool degrees = false) {
  out << YAML::Flow << YAML::BeginSeq;
  if (degrees) {
    deg(out, a);
    deg(out, b);
  } else {
    num(out, a);
    num(out, b);
  }
  out << YAML::EndSeq;
}

void emit_vec3(YAML::Emitter& out, const Eigen::Vector3d& v) { emit_segment(out, v, 0, 3, false); }

}  // namespace

Scenario parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    const int line = e.mark.line >= 0 ? e.mark.line + 1 : 0;
    throw ParseError("line " + std::to_string(line) + ": " + e.msg, "document", line);
  }
  return parse_document(root);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read scenario file " + path.string(), "file", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& sc) {
  YAML::Emitter out;
  out << YAML::BeginMap;

  out << YAML::Key << "scenario" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << sc.name;
  out << YAML::Key << "mode" << YAML::Value
      << (sc.mode == ControlMode::kAgile ? "agile" : "fault_tolerant");
  out << YAML::Key << "actuation" << YAML::Value
      << (sc.sagittal_only ? "sagittal_only" : "full");
  out << YAML::Key << "duration" << YAML::Value;
  num(out, sc.duration);
  out << YAML::Key << "seed" << YAML::Value << std::to_string(sc.seed);
  out << YAML::Key << "reference_speed" << YAML::Value;
  num(out, sc.reference_speed);
  out << YAML::Key << "waypoint_radius" << YAML::Value;
  num(out, sc.waypoint_radius);
  out << YAML::Key << "contact_enabled" << YAML::Value
      << (sc.contact_enabled ? "true" : "false");
  out << YAML::Key << "initial_state" << YAML::Value;
  emit_slices(out, sc.initial_state, kStateSlices, true);
  out << YAML::Key << "waypoints" << YAML::Value << YAML::BeginSeq;
  for (const Waypoint& w : sc.waypoints) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "position" << YAML::Value;
    emit_vec3(out, w.position);
    out << YAML::Key << "yaw_deg" << YAML::Value;
    deg(out, w.yaw);
    out << YAML::Key << "hold" << YAML::Value;
    num(out, w.hold);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  const PlantPerturbation& pp = sc.plant_perturbation;
  out << YAML::Key << "plant_perturbation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mass" << YAML::Value;
  num(out, pp.mass);
  out << YAML::Key << "inertia" << YAML::Value;
  num(out, pp.inertia);
  out << YAML::Key << "rotor_moment_gain" << YAML::Value;
  num(out, pp.rotor_moment_gain);
  out << YAML::Key << "drag_gamma" << YAML::Value;
  num(out, pp.drag_gamma);
  out << YAML::EndMap;
  out << YAML::EndMap;

  const RobotParams& r = sc.robot;
  out << YAML::Key << "robot" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "body_mass" << YAML::Value;
  num(out, r.body_mass);
  out << YAML::Key << "leg_mass" << YAML::Value;
  num(out, r.leg_mass);
  out << YAML::Key << "inertia" << YAML::Value;
  const bool diagonal = r.inertia.isApprox(
      Eigen::Matrix3d(r.inertia.diagonal().asDiagonal()), 0.0);
  if (diagonal) {
    emit_vec3(out, r.inertia.diagonal());
  } else {
    out << YAML::BeginSeq;
    for (int i = 0; i < 3; ++i) emit_vec3(out, r.inertia.row(i).transpose());
    out << YAML::EndSeq;
  }
  out << YAML::Key << "hip_offsets" << YAML::Value << YAML::BeginSeq;
  for (const auto& h : r.hip_offsets) emit_vec3(out, h);
  out << YAML::EndSeq;
  out << YAML::Key << "leg_length" << YAML::Value;
  num(out, r.leg_length);
  out << YAML::Key << "rotor_moment_gain" << YAML::Value;
  num(out, r.rotor_moment_gain);
  out << YAML::Key << "rotor_spin_signs" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double sgn : r.rotor_spin_signs) num(out, sgn);
  out << YAML::EndSeq;
  out << YAML::Key << "drag_gamma" << YAML::Value;
  num(out, r.drag_gamma);
  out << YAML::Key << "gravity" << YAML::Value;
  num(out, r.gravity);
  out << YAML::EndMap;

  const IntegratorConfig& ic = sc.integrator;
  out << YAML::Key << "integrator" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "plant_step" << YAML::Value;
  num(out, ic.plant_step);
  out << YAML::Key << "prediction_substeps" << YAML::Value << ic.prediction_substeps;
  out << YAML::Key << "control_period" << YAML::Value;
  num(out, ic.control_period);
  out << YAML::EndMap;

  const OcpConfig& c = sc.ocp;
  out << YAML::Key << "ocp" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "horizon" << YAML::Value << c.horizon;
  out << YAML::Key << "yaw_policy" << YAML::Value
      << (c.yaw_policy == YawPolicy::kFree ? "free" : "penalized");
  out << YAML::Key << "q_weights" << YAML::Value;
  emit_slices(out, c.q_weights, kStateSlices, false);
  out << YAML::Key << "r_weights" << YAML::Value;
  emit_slices(out, c.r_weights, kInputSlices, false);
  out << YAML::Key << "input_reference" << YAML::Value;
  emit_slices(out, c.input_reference, kInputSlices, false);
  out << YAML::Key << "thrust_bounds" << YAML::Value;
  emit_pair(out, c.thrust_min, c.thrust_max);
  out << YAML::Key << "joint_accel_bounds" << YAML::Value;
  emit_pair(out, c.joint_accel_min, c.joint_accel_max);
  out << YAML::Key << "attitude_limit_deg" << YAML::Value;
  deg(out, c.attitude_limit);
  out << YAML::Key << "joint_bounds_deg" << YAML::Value;
  emit_pair(out, c.joint_min, c.joint_max, true);
  out << YAML::Key << "side_sum_limit_deg" << YAML::Value;
  deg(out, c.side_sum_limit);
  out << YAML::Key << "attitude_soft_weight" << YAML::Value;
  num(out, c.attitude_soft_weight);
  out << YAML::Key << "joint_soft_weight" << YAML::Value;
  num(out, c.joint_soft_weight);
  out << YAML::Key << "side_sum_soft_weight" << YAML::Value;
  num(out, c.side_sum_soft_weight);
  out << YAML::Key << "singular_weight" << YAML::Value;
  num(out, c.singular_weight);
  out << YAML::Key << "disturbance_gain" << YAML::Value;
  num(out, c.disturbance_gain);
  out << YAML::Key << "precondition" << YAML::Value << (c.precondition ? "true" : "false");
  const BoxMinimizerOptions& o = c.solver;
  out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "gradient_tolerance" << YAML::Value;
  num(out, o.gradient_tolerance);
  out << YAML::Key << "relative_cost_tolerance" << YAML::Value;
  num(out, o.relative_cost_tolerance);
  out << YAML::Key << "max_iterations" << YAML::Value << o.max_iterations;
  out << YAML::Key << "memory" << YAML::Value << o.memory;
  out << YAML::Key << "armijo_c1" << YAML::Value;
  num(out, o.armijo_c1);
  out << YAML::Key << "max_backtracks" << YAML::Value << o.max_backtracks;
  out << YAML::EndMap;
  out << YAML::EndMap;

  out << YAML::Key << "faults" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value
      << (sc.faults.mode == LoeMode::kCap ? "cap" : "scale");
  out << YAML::Key << "events" << YAML::Value << YAML::BeginSeq;
  for (int i = 0; i < 4; ++i) {
    for (const FaultEvent& e : sc.faults.rotors[i]) {
      out << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "rotor" << YAML::Value << i + 1;
      out << YAML::Key << "time" << YAML::Value;
      num(out, e.start_time);
      out << YAML::Key << "effectiveness" << YAML::Value;
      num(out, e.effectiveness);
      out << YAML::EndMap;
    }
  }
  out << YAML::EndSeq;
  if (sc.randomized_fault) {
    const RandomizedFault& f = *sc.randomized_fault;
    out << YAML::Key << "randomized" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "rotor" << YAML::Value << f.rotor + 1;
    out << YAML::Key << "earliest" << YAML::Value;
    num(out, f.earliest);
    out << YAML::Key << "latest" << YAML::Value;
    num(out, f.latest);
    out << YAML::Key << "effectiveness" << YAML::Value;
    num(out, f.effectiveness);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  const ContactParams& ct = sc.contact;
  out << YAML::Key << "contact" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "stiffness" << YAML::Value;
  num(out, ct.stiffness);
  out << YAML::Key << "damping" << YAML::Value;
  num(out, ct.damping);
  out << YAML::Key << "transition_width" << YAML::Value;
  num(out, ct.transition_width);
  out << YAML::Key << "mu_static" << YAML::Value;
  num(out, ct.mu_static);
  out << YAML::Key << "mu_dynamic" << YAML::Value;
  num(out, ct.mu_dynamic);
  out << YAML::Key << "critical_velocity" << YAML::Value;
  num(out, ct.critical_velocity);
  out << YAML::Key << "wheel_radius" << YAML::Value;
  num(out, ct.wheel_radius);
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace morpho
