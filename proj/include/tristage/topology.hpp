#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tristage {

// One physical site of a party that operates from several locations.
struct Location {
  std::string id;
  std::string owner;  // party identifier, e.g. "A"
};

// Secure links join locations of the same party and are invisible to
// adversaries; insecure links cross the party boundary and are where all
// eavesdropping and tampering happens.
struct Link {
  std::string from;
  std::string to;
  bool secure = false;
  bool directed = true;

  std::string id() const { return from + "->" + to; }
};

struct Violation {
  std::string message;
  std::string element;
};

struct Topology {
  std::vector<Location> locations;
  std::vector<Link> links;

  const Location* find_location(const std::string& id) const {
    for (const auto& l : locations)
      if (l.id == id) return &l;
    return nullptr;
  }

  const Link* find_link(const std::string& link_id) const {
    for (const auto& l : links)
      if (l.id() == link_id) return &l;
    return nullptr;
  }

  std::vector<const Link*> insecure_links() const {
    std::vector<const Link*> out;
    for (const auto& l : links)
      if (!l.secure) out.push_back(&l);
    return out;
  }

  std::set<std::string> parties() const {
    std::set<std::string> out;
    for (const auto& l : locations) out.insert(l.owner);
    return out;
  }
};

// The figure geometries. Fig3 (same-area distributed parties) adds no new
// protocol flow over Fig2 plus secure satellites, so it has no builder.
enum class Figure { Fig2, Fig4, Fig5, Fig6 };

inline const char* figure_name(Figure f) {
  switch (f) {
    case Figure::Fig2: return "fig2";
    case Figure::Fig4: return "fig4";
    case Figure::Fig5: return "fig5";
    case Figure::Fig6: return "fig6";
  }
  return "?";
}

// Reports every broken topology invariant with the offending element.
inline std::vector<Violation> validate(const Topology& t) {
  std::vector<Violation> out;
  std::set<std::string> ids;
  for (const auto& loc : t.locations) {
    if (!ids.insert(loc.id).second) out.push_back({"duplicate location id", loc.id});
  }
  for (const auto& link : t.links) {
    const Location* a = t.find_location(link.from);
    const Location* b = t.find_location(link.to);
    if (!a || !b) {
      out.push_back({"link endpoint unknown", link.id()});
      continue;
    }
    if (link.from == link.to) out.push_back({"self-loop", link.id()});
    if (link.secure && a->owner != b->owner) out.push_back({"secure link crosses party boundary", link.id()});
    if (!link.secure && a->owner == b->owner) out.push_back({"insecure link inside one party", link.id()});
  }

  // Each party's locations must be connected under its secure links.
  for (const auto& party : t.parties()) {
    std::vector<std::string> members;
    for (const auto& loc : t.locations)
      if (loc.owner == party) members.push_back(loc.id);
    if (members.size() <= 1) continue;
    std::set<std::string> reached{members.front()};
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& link : t.links) {
        if (!link.secure) continue;
        const bool f = reached.count(link.from), g = reached.count(link.to);
        if (f && !g) { reached.insert(link.to); grew = true; }
        if (g && !f) { reached.insert(link.from); grew = true; }
      }
    }
    for (const auto& m : members)
      if (!reached.count(m)) out.push_back({"party not secure-connected", party + ":" + m});
  }

  // Communicating parties need at least one insecure link between them.
  const auto parties = t.parties();
  for (auto i = parties.begin(); i != parties.end(); ++i) {
    for (auto j = std::next(i); j != parties.end(); ++j) {
      bool found = false;
      for (const auto& link : t.links) {
        if (link.secure) continue;
        const Location* a = t.find_location(link.from);
        const Location* b = t.find_location(link.to);
        if (!a || !b) continue;
        if ((a->owner == *i && b->owner == *j) || (a->owner == *j && b->owner == *i)) found = true;
      }
      if (!found) out.push_back({"no insecure link between parties", *i + "/" + *j});
    }
  }
  return out;
}

// Builds the figure geometries.
//
// Fig2: one location per party, a single bidirectional insecure link.
//
// Fig4: interlaced forward chain. chain_length counts the forward insecure
// links (>= 3, one per protocol stage; longer chains leave spare units).
// Locations alternate A1, B1, A2, B2, ... and consecutive same-party
// locations are joined by secure links.
//
// Fig5: the two-stage reduction. Two forward insecure links A1->B1->A2,
// with B2 co-located at the A2 site. The A2/B2 hand-off is a co-location,
// not a wire, so it appears in transcripts but not here.
//
// Fig6: split-path geometry. A at three locations, B at one; insecure
// A1->B, A2->B, B->A3; secure A1-A2 and A1-A3.
inline Topology build_figure(Figure fig, int chain_length = 3) {
  Topology t;
  switch (fig) {
    case Figure::Fig2:
      t.locations = {{"A", "A"}, {"B", "B"}};
      t.links = {{"A", "B", false, false}};
      return t;
    case Figure::Fig4: {
      if (chain_length < 3) throw std::invalid_argument("fig4: chain_length must be >= 3 (one forward link per stage)");
      const int nodes = chain_length + 1;
      std::vector<std::string> ids;
      for (int i = 0; i < nodes; ++i) {
        const bool is_a = (i % 2 == 0);
        const std::string id = (is_a ? "A" : "B") + std::to_string(i / 2 + 1);
        t.locations.push_back({id, is_a ? "A" : "B"});
        ids.push_back(id);
      }
      for (int i = 0; i + 1 < nodes; ++i) t.links.push_back({ids[i], ids[i + 1], false, true});
      for (int i = 0; i + 2 < nodes; ++i) t.links.push_back({ids[i], ids[i + 2], true, false});
      return t;
    }
    case Figure::Fig5:
      t.locations = {{"A1", "A"}, {"B1", "B"}, {"A2", "A"}, {"B2", "B"}};
      t.links = {
          {"A1", "B1", false, true},
          {"B1", "A2", false, true},
          {"A1", "A2", true, false},
          {"B1", "B2", true, false},
      };
      return t;
    case Figure::Fig6:
      t.locations = {{"A1", "A"}, {"A2", "A"}, {"A3", "A"}, {"B", "B"}};
      t.links = {
          {"A1", "B", false, true},
          {"A2", "B", false, true},
          {"B", "A3", false, true},
          {"A1", "A2", true, false},
          {"A1", "A3", true, false},
      };
      return t;
  }
  throw std::logic_error("build_figure: unknown figure");
}

// All simple paths from one location to another over insecure links only,
// respecting link direction, at most max_len hops. Paths are produced in
// lexicographic order of their location-id sequence.
inline std::vector<std::vector<std::string>> insecure_paths(const Topology& t, const std::string& from,
                                                            const std::string& to, std::size_t max_len) {
  if (!t.find_location(from)) throw std::invalid_argument("insecure_paths: unknown location " + from);
  if (!t.find_location(to)) throw std::invalid_argument("insecure_paths: unknown location " + to);

  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& link : t.links) {
    if (link.secure) continue;
    adj[link.from].push_back(link.to);
    if (!link.directed) adj[link.to].push_back(link.from);
  }
  for (auto& [_, nbrs] : adj) std::sort(nbrs.begin(), nbrs.end());

  std::vector<std::vector<std::string>> out;
  std::vector<std::string> path{from};
  std::set<std::string> visited{from};
  auto dfs = [&](auto&& self, const std::string& cur) -> void {
    if (cur == to && path.size() > 1) {
      out.push_back(path);
      return;
    }
    if (path.size() > max_len) return;
    for (const auto& next : adj[cur]) {
      if (visited.count(next)) continue;
      visited.insert(next);
      path.push_back(next);
      self(self, next);
      path.pop_back();
      visited.erase(next);
    }
  };
  if (from != to) dfs(dfs, from);
  return out;
}

}  // namespace tristage
