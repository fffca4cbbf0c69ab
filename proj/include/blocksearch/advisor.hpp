#pragma once

/**
 * @file advisor.hpp
 * @brief Experiment advisor: sessions that hand out test points, take
 * measured values and report the guaranteed error bound.  Each session keeps
 * an append-only JSON-lines event log that rebuilds its state on replay.
 *
 * Endpoints:
 *   POST /sessions                      create
 *   GET  /sessions/{id}                 state
 *   POST /sessions/{id}/results         submit values for pending points
 *   GET  /sessions/{id}/whatif?cell=j   interval if point j were the argmax
 */

#include <blocksearch/json_io.hpp>
#include <blocksearch/runtime.hpp>

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <sstream>

namespace blocksearch {

class AdvisorError : public std::runtime_error {
 public:
  AdvisorError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

/// Relative tolerance when matching user-supplied points to pending ones.
inline constexpr double kPointTolerance = 1e-12;

struct Session {
  std::string id;
  std::string mode = "interactive";
  SearchState state;
  long long created_ms = 0;
  long long updated_ms = 0;
  std::vector<Json> events;
  std::optional<std::filesystem::path> log_path;
  mutable std::mutex mu;
};

namespace detail {

inline long long now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

inline Json points_json(const std::vector<QuadNum>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(to_json(x));
  return out;
}

inline Value value_from_json(const Json& j) {
  if (j.is_number()) return Value::of(j.get<double>());
  if (j.is_string()) return Value::of(QuadNum::parse(j.get<std::string>()));
  if (j.is_object()) {
    if (j.contains("exact")) return Value::of(quad_from_json(j));
    if (j.contains("float") && j.at("float").is_number()) return Value::of(j.at("float").get<double>());
  }
  throw AdvisorError(400, "bad measured value: " + j.dump());
}

inline Json value_to_event(const Value& v) {
  Json j{{"float", v.approx}};
  if (v.exact) j["exact"] = v.exact->to_string();
  return j;
}

inline QuadNum endpoint(const Json& body, const char* key, int index) {
  if (!body.contains("interval")) return QuadNum(index);
  const Json& iv = body.at("interval");
  if (iv.is_array() && iv.size() == 2) return quad_from_json(iv.at(static_cast<std::size_t>(index)));
  if (iv.is_object() && iv.contains(key)) return quad_from_json(iv.at(key));
  throw AdvisorError(400, "interval must be [lo, hi] or {\"lo\", \"hi\"}");
}

}  // namespace detail

class AdvisorStore {
 public:
  AdvisorStore() = default;
  /// Sessions are logged to `<dir>/<id>.jsonl`; existing logs are replayed.
  explicit AdvisorStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(*dir_);
    for (const auto& entry : std::filesystem::directory_iterator(*dir_)) {
      if (entry.path().extension() != ".jsonl") continue;
      std::ifstream in(entry.path());
      std::vector<Json> events;
      for (std::string line; std::getline(in, line);)
        if (!line.empty()) events.push_back(Json::parse(line));
      auto s = replay(events);
      s->log_path = entry.path();
      sessions_[s->id] = std::move(s);
    }
  }

  /// Rebuilds a session from its events; suggested and eliminated records
  /// must match what the replay produces.
  static std::shared_ptr<Session> replay(const std::vector<Json>& events) {
    if (events.empty() || events.front().value("type", "") != "created")
      throw std::invalid_argument("event log must start with a created record");
    const Json& c = events.front();
    auto s = std::make_shared<Session>();
    s->id = c.at("id").get<std::string>();
    s->mode = c.value("mode", "interactive");
    s->created_ms = s->updated_ms = c.at("ts").get<long long>();
    std::optional<int> horizon;
    if (c.contains("horizon") && !c.at("horizon").is_null()) horizon = c.at("horizon").get<int>();
    s->state = start_search(policy_from_json(c.at("policy")), quad_from_json(c.at("interval").at("lo")),
                            quad_from_json(c.at("interval").at("hi")), horizon);
    s->events.push_back(c);
    for (std::size_t k = 1; k < events.size(); ++k) {
      const Json& e = events[k];
      const std::string type = e.at("type").get<std::string>();
      if (type == "submitted") {
        std::vector<Value> vals;
        for (const auto& v : e.at("values")) vals.push_back(detail::value_from_json(v));
        s->state = eliminate(s->state, vals);
      } else if (type == "suggested") {
        if (e.at("points") != detail::points_json(s->state.pending))
          throw std::invalid_argument("replay diverged at suggested record " + std::to_string(k));
      } else if (type == "eliminated") {
        if (e.at("interval") != interval_json(s->state.lo(), s->state.hi()))
          throw std::invalid_argument("replay diverged at eliminated record " + std::to_string(k));
      } else {
        throw std::invalid_argument("unknown event type " + type);
      }
      s->updated_ms = e.at("ts").get<long long>();
      s->events.push_back(e);
    }
    return s;
  }

  Json create(const Json& body) {
    if (!body.is_object() || !body.contains("policy")) throw AdvisorError(400, "body needs \"policy\"");
    PolicySpec p;
    QuadNum lo, hi;
    try {
      p = policy_from_json(body.at("policy"));
      lo = detail::endpoint(body, "lo", 0);
      hi = detail::endpoint(body, "hi", 1);
    } catch (const AdvisorError&) {
      throw;
    } catch (const std::exception& e) {
      throw AdvisorError(400, e.what());
    }
    std::optional<int> horizon;
    if (body.contains("horizon") && !body.at("horizon").is_null()) {
      if (!body.at("horizon").is_number_integer() || body.at("horizon").get<int>() < 1)
        throw AdvisorError(400, "horizon must be a positive integer");
      horizon = body.at("horizon").get<int>();
    }
    // Fixed-horizon policies run exactly their declared number of steps.
    if (auto ph = policy_horizon(p); ph && (!horizon || *horizon > *ph)) horizon = *ph;
    auto s = std::make_shared<Session>();
    s->id = fresh_id();
    s->mode = body.value("mode", "interactive");
    if (s->mode != "interactive" && s->mode != "programmatic")
      throw AdvisorError(400, "mode must be interactive or programmatic");
    try {
      s->state = start_search(p, lo, hi, horizon);
    } catch (const std::exception& e) {
      throw AdvisorError(400, e.what());
    }
    s->created_ms = s->updated_ms = detail::now_ms();
    if (dir_) s->log_path = *dir_ / (s->id + ".jsonl");
    Json created{{"type", "created"},
                 {"ts", s->created_ms},
                 {"id", s->id},
                 {"mode", s->mode},
                 {"policy", policy_to_json(p)},
                 {"interval", {{"lo", lo.to_string()}, {"hi", hi.to_string()}}},
                 {"horizon", horizon ? Json(*horizon) : Json(nullptr)}};
    std::lock_guard lock(s->mu);
    append(*s, created);
    append(*s, {{"type", "suggested"}, {"ts", s->created_ms}, {"points", detail::points_json(s->state.pending)}});
    {
      std::unique_lock map_lock(map_mu_);
      sessions_[s->id] = s;
    }
    Json out = view(*s);
    out["suggested"] = out["state"]["pending"];
    return out;
  }

  Json get(const std::string& id) const {
    auto s = find(id);
    std::lock_guard lock(s->mu);
    return view(*s);
  }

  /// Body: {"values": [v, ...]} in pending order, or
  /// {"values": [{"point": x, "value": v}, ...]} matched by point.
  Json submit(const std::string& id, const Json& body) {
    auto s = find(id);
    std::lock_guard lock(s->mu);
    SearchState& st = s->state;
    if (!body.is_object() || !body.contains("values") || !body.at("values").is_array())
      throw AdvisorError(400, "body needs a \"values\" array");
    if (st.status == Status::Finished) throw AdvisorError(409, "session already finished");
    const Json& in = body.at("values");
    std::vector<std::optional<Value>> vals(st.pending.size());
    for (std::size_t k = 0; k < in.size(); ++k) {
      const Json& item = in[k];
      if (item.is_object() && item.contains("point")) {
        std::size_t idx = match_pending(st, item.at("point"));
        if (vals[idx]) throw AdvisorError(400, "duplicate value for pending point " + std::to_string(idx));
        vals[idx] = detail::value_from_json(item.at("value"));
      } else {
        if (k >= vals.size()) throw AdvisorError(400, "more values than pending points");
        vals[k] = detail::value_from_json(item);
      }
    }
    std::vector<Value> ready;
    for (std::size_t k = 0; k < vals.size(); ++k) {
      if (!vals[k]) throw AdvisorError(400, "missing value for pending point " + std::to_string(k));
      ready.push_back(*vals[k]);
    }
    try {
      st = eliminate(st, ready);
    } catch (const std::invalid_argument& e) {
      throw AdvisorError(400, e.what());
    }
    long long ts = detail::now_ms();
    Json ev = Json::array();
    for (const auto& v : ready) ev.push_back(detail::value_to_event(v));
    append(*s, {{"type", "submitted"}, {"ts", ts}, {"values", ev}});
    append(*s, {{"type", "eliminated"}, {"ts", ts}, {"interval", interval_json(st.lo(), st.hi())}});
    if (st.status == Status::Running)
      append(*s, {{"type", "suggested"}, {"ts", ts}, {"points", detail::points_json(st.pending)}});
    s->updated_ms = ts;
    Json out = view(*s);
    out["interval"] = out["state"]["interval"];
    out["retained"] = out["state"]["retained"];
    out["bound"] = out["state"]["bound"];
    out["finished"] = st.status == Status::Finished;
    out["suggested"] = out["state"]["pending"];
    return out;
  }

  /// Interval that results if the j-th of the current ordered points (pending
  /// and retained) holds the largest value.  Does not touch the session.
  Json whatif(const std::string& id, long cell) const {
    auto s = find(id);
    std::lock_guard lock(s->mu);
    const SearchState& st = s->state;
    if (st.status == Status::Finished) throw AdvisorError(409, "session already finished");
    std::vector<QuadNum> pts = st.pending;
    if (st.geometry.retained) pts.push_back(*st.geometry.retained);
    std::sort(pts.begin(), pts.end());
    if (cell < 0 || static_cast<std::size_t>(cell) >= pts.size())
      throw AdvisorError(400, "cell must lie in [0, " + std::to_string(pts.size() - 1) + "]");
    Geometry g = advance(st.geometry, pts, static_cast<std::size_t>(cell));
    return {{"id", s->id},
            {"cell", cell},
            {"cells", pts.size()},
            {"point", to_json(pts[static_cast<std::size_t>(cell)])},
            {"interval", interval_json(g.lo, g.hi)},
            {"bound", to_json(g.accuracy())}};
  }

  std::vector<Json> events(const std::string& id) const {
    auto s = find(id);
    std::lock_guard lock(s->mu);
    return s->events;
  }

 private:
  std::shared_ptr<Session> find(const std::string& id) const {
    std::shared_lock lock(map_mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw AdvisorError(404, "unknown session " + id);
    return it->second;
  }

  static std::size_t match_pending(const SearchState& st, const Json& point) {
    double x;
    if (point.is_number()) x = point.get<double>();
    else {
      try {
        x = quad_from_json(point).to_double();
      } catch (const std::exception& e) {
        throw AdvisorError(400, e.what());
      }
    }
    const double scale = (st.b - st.a).to_double();
    for (std::size_t k = 0; k < st.pending.size(); ++k) {
      double p = st.pending[k].to_double();
      if (std::abs(x - p) <= kPointTolerance * std::max(std::abs(p), scale)) return k;
    }
    throw AdvisorError(409, "point " + point.dump() + " is not pending");
  }

  static Json view(const Session& s) {
    return {{"id", s.id},
            {"mode", s.mode},
            {"created_ms", s.created_ms},
            {"updated_ms", s.updated_ms},
            {"state", to_json(s.state)}};
  }

  void append(Session& s, const Json& event) {
    s.events.push_back(event);
    if (s.log_path) {
      std::ofstream out(*s.log_path, std::ios::app);
      out << event.dump() << '\n';
      if (!out) throw AdvisorError(500, "cannot write event log " + s.log_path->string());
    }
  }

  std::string fresh_id() {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    std::ostringstream os;
    os << std::hex << rng() << '-' << ++counter_;
    return os.str();
  }

  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex map_mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::atomic<long> counter_{0};
};

// ---------------------------------------------------------------------------
// HTTP front end

inline void install_routes(httplib::Server& svr, AdvisorStore& store) {
  auto reply = [](httplib::Response& res, const std::function<Json()>& body) {
    try {
      res.set_content(body().dump(), "application/json");
    } catch (const AdvisorError& e) {
      res.status = e.status();
      res.set_content(Json{{"error", e.what()}}.dump(), "application/json");
    } catch (const Json::exception& e) {
      res.status = 400;
      res.set_content(Json{{"error", std::string("bad JSON: ") + e.what()}}.dump(), "application/json");
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(Json{{"error", e.what()}}.dump(), "application/json");
    }
  };
  svr.Post("/sessions", [&store, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, [&] {
      res.status = 201;
      return store.create(Json::parse(req.body));
    });
  });
  svr.Get(R"(/sessions/([^/]+))", [&store, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, [&] { return store.get(req.matches[1]); });
  });
  svr.Post(R"(/sessions/([^/]+)/results)",
           [&store, reply](const httplib::Request& req, httplib::Response& res) {
             reply(res, [&] { return store.submit(req.matches[1], Json::parse(req.body)); });
           });
  svr.Get(R"(/sessions/([^/]+)/whatif)", [&store, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, [&] {
      if (!req.has_param("cell")) throw AdvisorError(400, "query needs cell=j");
      long cell = 0;
      try {
        cell = std::stol(req.get_param_value("cell"));
      } catch (const std::exception&) {
        throw AdvisorError(400, "cell must be an integer");
      }
      return store.whatif(req.matches[1], cell);
    });
  });
}

}  // namespace blocksearch
