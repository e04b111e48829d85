// Acceptance suite: one PASS/FAIL line per exit criterion. Exit status is
// the number of failed criteria.

#include "auxsim/session.hpp"
#include "oracles.hpp"
#include "scenario_gen.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

using namespace auxsim;
namespace fs = std::filesystem;

namespace {

// Collects failed checks of one criterion; the first few are printed.
struct Check {
  std::vector<std::string> failures;
  std::string note;

  bool operator()(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
    return ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int decimals = 6) { return format_fixed(v, decimals); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  return buf;
}

double wrap180(double d) {
  double x = std::fmod(d + 180.0, 360.0);
  if (x < 0) x += 360.0;
  return x - 180.0;
}

void finish(Simulator& sim) {
  for (int guard = 0; sim.busy() && guard < 200000; ++guard) sim.step();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<ScenarioScript> load(const std::string& name) {
  auto r = parse_scenario(read_file(fs::path(AUXSIM_SCENARIO_DIR) / name));
  return r.script;
}

// ---------------------------------------------------------------------------

void separation_law(Check& ok) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_formula = 0.0, worst_fk = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double theta = 180.0 * k / 999.0;
    for (double l : {10.0, 25.0, 37.5}) {
      const double expect = l * std::sin(theta * kPi / 360.0);
      worst_formula = std::max(worst_formula, std::abs(unit_separation(l, theta) - expect));
    }
  }
  const UnitGeometry sq = UnitGeometry::make_default(90.0, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const double opening = 180.0 * k / 999.0;
    const BodyPose pose = body_fk(sq, fold_from_opening(sq, opening));
    worst_fk = std::max(worst_fk, std::abs(measured_separation(sq, pose) - unit_separation(sq.l_mm, opening)));
  }
  const double elapsed = seconds_since(t0);
  ok(worst_formula <= 1e-12, "formula error " + sci(worst_formula));
  ok(worst_fk <= 1e-9, "body_fk gap error " + sci(worst_fk));
  ok(elapsed < 1.0, "runtime " + fmt(elapsed, 3) + " s");
  ok.note = "max error " + sci(worst_formula) + " (formula), " + sci(worst_fk) + " mm (body_fk), " +
            fmt(elapsed, 3) + " s";
}

void range_formula(Check& ok) {
  const auto t0 = std::chrono::steady_clock::now();
  const AngleRange sq = theta_range(90.0);
  const AngleRange pe = theta_range(108.0);
  ok(sq.low == 0.0 && sq.high == 180.0, "theta_range(90)");
  ok(pe.low == 0.0 && pe.high == 144.0, "theta_range(108)");

  // locate the onset with the clipping oracle alone, then hold the library to it
  const UnitGeometry g = UnitGeometry::make_default(108.0, 25.0);
  double lo = 100.0, hi = 200.0;
  if (!ok(!oracle::oracle_self_contact(g, lo) && oracle::oracle_self_contact(g, hi), "oracle bracket")) return;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (oracle::oracle_self_contact(g, mid) ? hi : lo) = mid;
  }
  const double onset = 0.5 * (lo + hi);
  ok(std::abs(onset - 144.0) <= 0.1, "oracle onset " + fmt(onset));
  ok(!self_contact(g, 144.0 - 0.1), "self_contact before 143.9");
  ok(self_contact(g, 144.0 + 0.1), "self_contact after 144.1");
  int disagreements = 0;
  for (double t = 0.0; t < 360.0; t += 0.05) {
    if (std::abs(t - onset) < 1e-6) continue;
    disagreements += self_contact(g, t) != oracle::oracle_self_contact(g, t);
  }
  ok(disagreements == 0, std::to_string(disagreements) + " sweep points disagree with the oracle");
  const double elapsed = seconds_since(t0);
  ok(elapsed < 5.0, "runtime " + fmt(elapsed, 3) + " s");
  ok.note = "onset " + fmt(onset, 9) + " deg, " + fmt(elapsed, 3) + " s";
}

void poisson(Check& ok) {
  const LatticeSpec squares{UnitGeometry::make_default(90.0, 10.0), 3, 3};
  double worst = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double t = 180.0 * k / 21.0;
    worst = std::max(worst, std::abs(poisson_ratio(squares, t, 1e-3) + 1.0));
  }
  ok(worst <= 1e-6, "squares |nu + 1| " + sci(worst));

  const LatticeSpec pent{UnitGeometry::make_default(108.0, 25.0), 3, 3};
  double worst_pent = 0.0;
  for (double t : {10.0, 25.0, 40.0, 55.0, 72.0, 90.0, 100.0, 115.0, 130.0}) {
    const double lib = poisson_ratio(pent, t, 1e-2);
    const double ref = oracle::oracle_poisson(pent.geometry, t, 1e-2, 3, 3);
    worst_pent = std::max(worst_pent, std::abs(lib - ref));
  }
  ok(worst_pent <= 1e-6, "pentagon vs oracle " + sci(worst_pent));
  ok.note = "squares |nu + 1| " + sci(worst) + ", pentagon vs brute force " + sci(worst_pent);
}

void finger_calibration(Check& ok) {
  const ActuatorCalibration cal;
  struct Case {
    const char* name;
    int c1, c2;
    double phi1, phi2;
  };
  const Case cases[] = {{"chamber 2", 0, 1, 120.0, 0.0}, {"chamber 1", 1, 0, 0.0, 105.0}, {"both", 1, 1, 144.0, 105.0}};
  double worst_settle = 0.0;
  for (const Case& c : cases) {
    const HingeAngles h = hinge_targets(cal, c.c1, c.c2);
    ok(h.phi1_deg == c.phi1 && h.phi2_deg == c.phi2, std::string(c.name) + " target");

    Simulator sim{Config{}};
    if (c.c1) sim.apply(Command::set_chamber(finger_chamber(0, 1), ChamberCommand::vacuum));
    if (c.c2) sim.apply(Command::set_chamber(finger_chamber(0, 2), ChamberCommand::vacuum));
    double settle = -1.0;
    for (int i = 0; i < 4000; ++i) {
      sim.step();
      const FingerState& f = sim.state().fingers[0];
      const bool near = std::abs(f.phi1_deg - c.phi1) <= 0.01 * std::max(c.phi1, c.phi2) &&
                        std::abs(f.phi2_deg - c.phi2) <= 0.01 * std::max(c.phi1, c.phi2);
      if (near && settle < 0) settle = sim.time_s();
    }
    const FingerState& f = sim.state().fingers[0];
    ok(f.phi1_deg == c.phi1 && f.phi2_deg == c.phi2,
       std::string(c.name) + " steady state " + fmt(f.phi1_deg) + "/" + fmt(f.phi2_deg));
    ok(settle >= 0 && settle < 1.0, std::string(c.name) + " settling " + fmt(settle, 3) + " s");
    worst_settle = std::max(worst_settle, settle);
  }
  FingerState both;
  both.phi1_deg = 144.0;
  both.phi2_deg = 105.0;
  const double tip = finger_fk(both, cal).tip_orientation_deg;
  ok(std::abs(tip - 249.0) < 1e-9 && tip > 180.0, "tip rotation " + fmt(tip));
  ok.note = "tip " + fmt(tip, 3) + " deg, 99% settling " + fmt(worst_settle, 3) + " s";
}

void forces(Check& ok) {
  const ActuatorCalibration cal;
  const double d = cal.deficit_ref_deg;
  const double tip = blocked_force(cal, ForcePoint::tip, 1, 1, d);
  const double stage = blocked_force(cal, ForcePoint::stage1, 1, 1, d);
  ok(tip == 15.04, "tip " + fmt(tip, 9));
  ok(stage == 11.13, "stage 1 " + fmt(stage, 9));
  for (ForcePoint p : {ForcePoint::tip, ForcePoint::stage1}) {
    ok(blocked_force(cal, p, 0, 0, d) == 0.0, "ambient force");
  }
  ok.note = "tip " + fmt(tip, 2) + " N, stage 1 " + fmt(stage, 2) + " N";
}

void lock_machine(Check& ok) {
  Simulator mid{Config{}};
  mid.run_ticks(1000000);
  ok(mid.state().fold_deg == 0.0 && !mid.state().lock.engaged, "middle state drifted");

  Simulator sim{Config{}};
  const double threshold = sim.config().lock.lock_threshold_deg;
  sim.apply(Command::set_chamber(body_chamber(0), ChamberCommand::vacuum));
  sim.apply(Command::set_chamber(body_chamber(2), ChamberCommand::vacuum));
  // the latch itself, either side of the threshold and on both folds
  for (double sign : {1.0, -1.0}) {
    const double near = sign * (sim.theta_max() - 0.999 * threshold);
    const double far = sign * (sim.theta_max() - 1.001 * threshold);
    ok(lock_update(near, sim.theta_max(), {}, sim.config().lock).engaged, "no latch inside the threshold");
    ok(!lock_update(far, sim.theta_max(), {}, sim.config().lock).engaged, "latched outside the threshold");
  }
  double last_unlatched = 0.0;
  for (int i = 0; i < 1000 && !sim.state().lock.engaged; ++i) {
    last_unlatched = sim.state().fold_deg;
    sim.step();
  }
  ok(sim.state().lock.engaged, "never latched");
  ok(sim.theta_max() - last_unlatched >= threshold, "unlatched inside the threshold");
  ok(sim.state().fold_deg == sim.theta_max(), "latched fold " + fmt(sim.state().fold_deg));

  sim.apply(Command::set_chamber(body_chamber(0), ChamberCommand::ambient));
  sim.apply(Command::set_chamber(body_chamber(2), ChamberCommand::ambient));
  const SimState held = sim.state();
  sim.run_ticks(1000000);
  ok(sim.state().lock.engaged && sim.state().fold_deg == held.fold_deg, "spontaneous unlock");

  // the pair that folded it cannot release it
  sim.apply(Command::set_chamber(body_chamber(0), ChamberCommand::vacuum));
  sim.apply(Command::set_chamber(body_chamber(2), ChamberCommand::vacuum));
  sim.run_ticks(800);
  ok(sim.state().lock.engaged, "released by the folding pair");
  // one chamber of the opposing pair is not enough
  sim.apply(Command::set_chamber(body_chamber(0), ChamberCommand::ambient));
  sim.apply(Command::set_chamber(body_chamber(2), ChamberCommand::ambient));
  sim.apply(Command::set_chamber(body_chamber(1), ChamberCommand::vacuum));
  sim.run_ticks(800);
  ok(sim.state().lock.engaged, "released by a single chamber");
  sim.apply(Command::set_chamber(body_chamber(3), ChamberCommand::vacuum));
  sim.run_ticks(100);
  ok(!sim.state().lock.engaged, "opposing pair did not release");
  for (int k = 0; k < 4; ++k) sim.apply(Command::set_chamber(body_chamber(k), ChamberCommand::ambient));
  sim.run_ticks(4000);
  ok(sim.state().fold_deg == 0.0 && !sim.state().lock.engaged, "no return to the middle state");
  ok(sim.state().lock.mode == Mode::cross_link, "mode after release");
  ok.note = "latched from " + fmt(last_unlatched, 3) + " deg, held 1e6 ticks, middle state held 1e6 ticks";
}

void turn(Check& ok) {
  double worst = 0.0;
  for (int dir : {1, -1}) {
    // an idle latched pose, the state a turn starts from in a gait sequence
    Simulator sim{Config{}};
    sim.apply(Command::turn(1));
    finish(sim);
    sim.run_ticks(400);
    if (!ok(sim.state().lock.engaged, "setup not latched")) return;
    const double heading = sim.state().pose.heading_deg;
    const std::int64_t start = sim.state().tick;
    sim.apply(Command::set_chamber(body_chamber(1), ChamberCommand::vacuum));
    sim.apply(Command::set_chamber(body_chamber(3), ChamberCommand::vacuum));
    const auto rejected = sim.apply(Command::turn(dir));
    ok(!rejected, "turn rejected: " + rejected.value_or(""));
    finish(sim);
    const double elapsed = static_cast<double>(sim.state().tick - start) * sim.tick_s();
    const double dh = wrap180(sim.state().pose.heading_deg - heading);
    ok(std::abs(std::abs(dh) - 144.0) < 1e-9 && std::abs(dh) > 90.0, "heading change " + fmt(dh));
    ok(dh * dir > 0, "turned the wrong way");
    ok(elapsed < 2.0, "turn took " + fmt(elapsed, 3) + " s");
    worst = std::max(worst, elapsed);

    bool any_vacuum = false;
    for (const auto& ch : sim.state().chambers) any_vacuum |= ch.command == ChamberCommand::vacuum;
    ok(!any_vacuum, "chambers still commanded after the turn");
    const SimState held = sim.state();
    sim.run_ticks(100000);
    ok(sim.state().lock.engaged && sim.state().fold_deg == held.fold_deg && sim.state().pose == held.pose,
       "pose not held unpowered");
  }
  ok.note = "|dheading| 144 deg in " + fmt(worst, 3) + " s from a latched pose, held unpowered";
}

void grasp_outcomes(Check& ok) {
  const Config c;
  const LockState plus{Mode::parallel_plus, true, true};
  const LockState minus{Mode::parallel_minus, true, true};
  auto trial = [&](double fold, const ObjectSpec& o, const GripperSpec& g) {
    const LockState lock = fold > 143.0 ? plus : (fold < -143.0 ? minus : LockState{});
    return grasp_trial(g, fold, lock, o, c.grasp);
  };
  const ObjectSpec box = c.object;
  ok(box.shape == Shape::rectangle && box.mass_kg == 1.0, "default object is not the 1 kg box");
  const GraspTrial first_par = trial(144.0, box, c.gripper);
  const GraspTrial first_cross = trial(0.0, box, c.gripper);
  for (int i = 0; i < 10; ++i) {
    const GraspTrial par = trial(144.0, box, c.gripper);
    const GraspTrial cross = trial(0.0, box, c.gripper);
    ok(par.verdict.success && par.mode.mode == GripperMode::parallel, "parallel box failed");
    ok(!cross.verdict.success && cross.verdict.reason == GraspReason::slip, "cross-link box did not slip");
    ok(std::memcmp(&par.verdict.margin, &first_par.verdict.margin, sizeof(double)) == 0 &&
           std::memcmp(&cross.verdict.margin, &first_cross.verdict.margin, sizeof(double)) == 0,
       "verdict margin changed between repeats");
  }
  for (double r : {80.0, 100.0, 120.0}) {
    ok(trial(0.0, ObjectSpec::circle(r, 0.5, 0.6), c.gripper).verdict.success,
       "circle r=" + fmt(r, 0) + " failed in cross-link mode");
  }

  // randomized scenes
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> radius(60.0, 140.0), side(40.0, 320.0), mass(0.0, 3.0), mu(0.0, 1.2),
      bump(0.0, 0.8), cap(2.0, 30.0), extra(0.0, 20.0), any_fold(-144.0, 144.0);
  std::bernoulli_distribution circ(0.4);
  std::uniform_int_distribution<int> pick(0, 3);
  auto object = [&] {
    return circ(rng) ? ObjectSpec::circle(radius(rng), mass(rng), mu(rng))
                     : ObjectSpec::rectangle(side(rng), side(rng), mass(rng), mu(rng));
  };
  auto fold = [&] {
    const int k = pick(rng);
    return k == 0 ? 0.0 : k == 1 ? 144.0 : k == 2 ? -144.0 : any_fold(rng);
  };
  int cases = 0, successes = 0, violations = 0;
  for (int i = 0; i < 1000; ++i, ++cases) {
    ObjectSpec o = object();
    const double f = fold();
    const bool base = trial(f, o, c.gripper).verdict.success;
    o.mu += bump(rng);
    successes += base;
    violations += base && !trial(f, o, c.gripper).verdict.success;
  }
  for (int i = 0; i < 1000; ++i, ++cases) {
    const ObjectSpec o = object();
    const double f = fold();
    GripperSpec g = c.gripper;
    g.calibration.f_tip_max_n = cap(rng);
    const bool base = trial(f, o, g).verdict.success;
    g.calibration.f_tip_max_n += extra(rng);
    successes += base;
    violations += base && !trial(f, o, g).verdict.success;
  }
  ok(violations == 0, std::to_string(violations) + " monotonicity violations");
  ok(successes > 100, "only " + std::to_string(successes) + " successful scenes");
  ok.note = "parallel success margin " + fmt(first_par.verdict.margin, 3) + ", cross-link " +
            std::string(reason_name(first_cross.verdict.reason)) + ", " + std::to_string(cases) +
            " monotonicity cases";
}

void gait(Check& ok) {
  // mu = 0: the feet slide back and the body stays where it was
  {
    Config c;
    c.gait.foot_mu = {0, 0, 0, 0};
    Simulator sim(c);
    const QuadrupedPose before = sim.state().pose;
    run_gait(sim, std::vector<Command>(4, Command::gait_step(0, 1)));
    ok(sim.state().pose == before, "mu=0 moved the body");
  }
  // symmetric friction: a straight line
  {
    Simulator sim{Config{}};
    const GaitRun run = run_gait(sim, std::vector<Command>(6, Command::gait_step(0, 1)));
    ok(!run.error && run.samples.size() == 7, "straight run incomplete");
    double lateral = 0.0;
    for (const auto& s : run.samples) {
      lateral = std::max(lateral, std::abs(s.pose.x_mm));
      ok(s.pose.heading_deg == 0.0, "heading changed under symmetric friction");
    }
    ok(lateral < 1e-9, "lateral drift " + sci(lateral));
  }
  // asymmetric friction: heading drifts one way, step after step
  int drift_runs = 0;
  for (double ratio : {0.9, 0.95, 1.0 / 0.95}) {
    Config c;
    c.gait.foot_mu = {0.6, 0.6, 0.6 * ratio, 0.6};
    Simulator sim(c);
    const GaitRun run = run_gait(sim, std::vector<Command>(10, Command::gait_step(0, 1)));
    if (!ok(!run.error, "drift run failed")) continue;
    double sign = 0.0;
    bool monotone = true;
    for (std::size_t i = 1; i < run.samples.size(); ++i) {
      const double dh = wrap180(run.samples[i].pose.heading_deg - run.samples[i - 1].pose.heading_deg);
      if (sign == 0.0) sign = dh > 0 ? 1.0 : -1.0;
      monotone &= std::abs(dh) > 1e-9 && dh * sign > 0.0;
    }
    ok(monotone, "heading drift not monotone at ratio " + fmt(ratio, 3));
    drift_runs += monotone;
  }
  // crawl step against the hand-written FK difference
  const GripperSpec g;
  const double r = kPi / 180.0;
  const double straight = 40.0 + 40.0 + 40.0;
  const double curled = 40.0 + 40.0 * std::cos(144.0 * r) + 40.0 * std::cos(249.0 * r);
  double worst = 0.0;
  for (double fold : {0.0, 144.0, -144.0}) {
    const auto mounts = finger_mounts(g.geometry, fold, g.mount_depth_mm);
    for (int a = 0; a < 4; ++a) {
      const int b = (a + 1) % 4;
      const double half_gap = 0.5 * bearing_gap_deg(mounts[a].bearing_deg, mounts[b].bearing_deg);
      const StepResult step = crawl_step({}, g, fold, GaitParams{}, a, b);
      worst = std::max(worst, std::abs(step.displacement_mm - (straight - curled) * std::cos(half_gap * r)));
    }
  }
  ok(worst <= 1e-9, "FK oracle error " + sci(worst));
  // replay determinism
  const auto drift = load("drift.json");
  if (ok(drift.has_value(), "drift.json does not parse")) {
    const RunReport a = replay(*drift);
    const RunReport b = replay(*drift);
    ok(a.trajectory_csv == b.trajectory_csv && a.markers_csv == b.markers_csv && a.chambers_csv == b.chambers_csv,
       "CSV differs between runs");
    ok(!a.trajectory_csv.empty(), "empty trajectory");
  }
  ok.note = "raw step " + fmt(straight - curled, 6) + " mm, oracle error " + sci(worst) + " mm, " +
            std::to_string(drift_runs) + " drift runs monotone";
}

void scenario_round_trip(Check& ok) {
  std::vector<ScenarioScript> corpus;
  for (const auto& entry : fs::directory_iterator(AUXSIM_SCENARIO_DIR)) {
    if (entry.path().extension() != ".json") continue;
    auto s = load(entry.path().filename().string());
    if (ok(s.has_value(), entry.path().filename().string() + " does not parse")) corpus.push_back(*s);
  }
  const auto ft = load("forward_turn.json");
  if (ok(ft.has_value(), "forward_turn.json missing")) {
    // forward phase, one turn, forward phase
    std::string shape;
    for (const auto& c : ft->commands) {
      const char k = c.command.type == CommandType::gait_step ? 'g' : c.command.type == CommandType::turn ? 't' : '?';
      if (shape.empty() || shape.back() != k) shape.push_back(k);
    }
    ok(shape == "gtg", "forward_turn phases " + shape);
  }
  std::mt19937_64 rng(23);
  while (corpus.size() < 30) corpus.push_back(gen::random_script(rng));
  int identical = 0;
  for (const auto& s : corpus) {
    const std::string text = emit_scenario(s);
    const auto back = parse_scenario(text);
    const bool same = back.script && *back.script == s && emit_scenario(*back.script) == text;
    identical += same;
  }
  ok(identical == static_cast<int>(corpus.size()), "round trip broke on " +
                                                        std::to_string(corpus.size() - identical) + " scripts");

  // interactive sessions replayed from their command logs
  int replayed = 0;
  const int sessions = 3;
  for (int k = 0; k < sessions; ++k) {
    SessionOptions o;
    o.manual = true;
    o.config.gait.foot_mu = {0.6, 0.6 - 0.05 * k, 0.6, 0.6};
    Session s("a" + std::to_string(k), o);
    auto send = [&](Command c) {
      ServiceMessage m;
      m.op = c.type == CommandType::chamber     ? ServiceOp::set_chamber
             : c.type == CommandType::gait_step ? ServiceOp::start_gait
             : c.type == CommandType::turn      ? ServiceOp::turn
                                                : ServiceOp::grasp_trial;
      m.command = c;
      s.submit(m).get();
    };
    send(Command::gait_step(k % 4, (k + 1) % 4));
    s.step(900 + 37 * k);
    send(Command::set_chamber(finger_chamber(k, 2), ChamberCommand::vacuum));
    s.step(2300);
    send(Command::turn(k % 2 ? -1 : 1));
    s.step(700);
    send(Command::grasp());
    send(Command::set_chamber(body_chamber(1), ChamberCommand::vacuum));
    s.step(155);
    json live = s.latest()->body["state"];
    const auto back = parse_scenario(emit_scenario(s.command_log()));
    s.stop();
    if (!ok(back.script.has_value(), "session log does not parse")) continue;
    std::optional<Simulator> sim;
    const RunReport rep = replay(*back.script, sim);
    json again = state_json(*sim);
    live.erase("events");
    again.erase("events");
    const bool same = !rep.fatal && again == live;
    ok(same, "session " + std::to_string(k) + " replay differs");
    replayed += same;
  }
  ok.note = std::to_string(identical) + "/" + std::to_string(corpus.size()) + " scripts round trip, " +
            std::to_string(replayed) + "/" + std::to_string(sessions) + " session logs replay exactly";
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Check&)>> criteria[] = {
      {"separation law", separation_law},   {"range and self-contact", range_formula},
      {"poisson ratio", poisson},           {"finger calibration", finger_calibration},
      {"forces", forces},                   {"lock state machine", lock_machine},
      {"turn", turn},                       {"grasp outcomes", grasp_outcomes},
      {"gait", gait},                       {"scenario round trip", scenario_round_trip},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool pass = c.failures.empty();
    failed += !pass;
    std::printf("%s  %-24s %s (%.2f s)\n", pass ? "PASS" : "FAIL", name, c.note.c_str(), seconds_since(t0));
    for (std::size_t i = 0; i < c.failures.size() && i < 5; ++i) std::printf("      %s\n", c.failures[i].c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed;
}
