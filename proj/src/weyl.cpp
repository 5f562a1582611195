#include "nichols/weyl.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace nichols {

Diagram reflect(const Diagram& d, int i) {
  auto row = cartan_row(d, i);
  if (!row) throw NotReflectable(i);
  const auto& c = *row;
  const int n = d.rank();
  // Canonical representative: q_jk = qt_jk for j < k, q_kj = 1.
  auto q = [&](int j, int k) -> RootOfUnity {
    if (j == k) return d.vertex(j);
    return j < k ? d.edge(j, k) : RootOfUnity::one();
  };
  const RootOfUnity& qii = d.vertex(i);
  auto rho = [&](int j, int k) {
    return q(j, k) * q(i, k).pow(-c[j]) * q(j, i).pow(-c[k]) * qii.pow(c[j] * c[k]);
  };
  Diagram r(n);
  for (int j = 0; j < n; ++j) {
    r.set_vertex(j, rho(j, j));
    for (int k = j + 1; k < n; ++k) r.set_edge(j, k, rho(j, k) * rho(k, j));
  }
  return r;
}

WeylOrbit orbit(const Diagram& d, const Caps& caps) {
  WeylOrbit o;
  std::unordered_map<std::string, int> index;
  o.members.push_back(d);
  o.edges.emplace_back(d.rank(), -1);
  index.emplace(exact_key(d), 0);
  for (size_t m = 0; m < o.members.size(); ++m) {
    for (int i = 0; i < d.rank(); ++i) {
      Diagram r;
      try {
        r = reflect(o.members[m], i);
      } catch (const NotReflectable&) {
        o.status = OrbitStatus::NotAllReflections;
        o.failing_member = static_cast<int>(m);
        o.failing_vertex = i;
        return o;
      }
      auto [it, fresh] = index.emplace(exact_key(r), static_cast<int>(o.members.size()));
      if (fresh) {
        if (o.members.size() >= caps.max_members) {
          o.status = OrbitStatus::CapExceeded;
          return o;
        }
        o.members.push_back(r);
        o.edges.emplace_back(d.rank(), -1);
      }
      o.edges[m][i] = it->second;
    }
  }
  return o;
}

namespace {

struct RootHash {
  size_t operator()(const Root& r) const noexcept {
    uint64_t h = 1469598103934665603ull;
    for (int16_t x : r) h = (h ^ static_cast<uint16_t>(x)) * 1099511628211ull;
    return static_cast<size_t>(h);
  }
};

struct Obj {
  Diagram d;
  bool have_cartan = false;
  CartanMatrix C;
  std::array<int, kMaxRank> next;
  std::unordered_set<Root, RootHash> roots;
};

struct Closure {
  const Caps& caps;
  int n;
  std::vector<Obj> objs;
  std::unordered_map<std::string, int> index;
  std::deque<std::pair<int, Root>> work;
  RootSystemResult res;

  Closure(const Caps& c, int rank) : caps(c), n(rank) {}

  Root simple(int i) const {
    Root r{};
    r[i] = 1;
    return r;
  }

  // Returns -1 on cap.
  int add_object(const Diagram& d) {
    auto [it, fresh] = index.emplace(exact_key(d), static_cast<int>(objs.size()));
    if (!fresh) return it->second;
    if (objs.size() >= caps.max_members) return -1;
    Obj o;
    o.d = d;
    o.next.fill(-1);
    objs.push_back(std::move(o));
    int id = static_cast<int>(objs.size()) - 1;
    for (int i = 0; i < n; ++i) {
      objs[id].roots.insert(simple(i));
      work.emplace_back(id, simple(i));
    }
    return id;
  }

  bool fail(RootStatus s, std::string note) {
    res.status = s;
    res.note = std::move(note);
    return false;
  }

  bool run(const Diagram& d) {
    add_object(d);
    while (!work.empty()) {
      auto [b, g] = work.front();
      work.pop_front();
      if (!objs[b].have_cartan) {
        auto cm = cartan_matrix(objs[b].d);
        if (!cm.ok()) {
          res.failing_object = objs[b].d;
          res.failing_vertex = cm.failing_vertex;
          return fail(RootStatus::NotAllReflections, "object not reflectable");
        }
        objs[b].C = *cm.matrix;
        objs[b].have_cartan = true;
      }
      for (int i = 0; i < n; ++i) {
        if (g == simple(i)) continue;
        if (objs[b].next[i] < 0) {
          int t = add_object(reflect(objs[b].d, i));
          if (t < 0) return fail(RootStatus::CapExceeded, "object count exceeds cap");
          objs[b].next[i] = t;
        }
        const int t = objs[b].next[i];
        int64_t coef = 0;
        for (int j = 0; j < n; ++j) coef += objs[b].C(i, j) * g[j];
        int64_t gi = g[i] - coef;
        if (gi < 0) return fail(RootStatus::CapExceeded, "reflection produced a non-positive vector");
        if (gi > 30000) return fail(RootStatus::CapExceeded, "root coefficient exceeds representable range");
        Root h = g;
        h[i] = static_cast<int16_t>(gi);
        if (objs[t].roots.insert(h).second) {
          if (objs[t].roots.size() > caps.max_roots) return fail(RootStatus::CapExceeded, "root count exceeds cap");
          work.emplace_back(t, h);
        }
      }
    }
    res.status = RootStatus::Finite;
    return true;
  }
};

}  // namespace

RootSystemResult positive_roots(const Diagram& d, const Caps& caps) {
  Closure cl(caps, d.rank());
  cl.run(d);
  RootSystemResult res = std::move(cl.res);
  res.orbit_size = cl.objs.size();
  for (const auto& o : cl.objs) res.objects.push_back(o.d);
  if (res.status == RootStatus::Finite) {
    const auto& r0 = cl.objs[0].roots;
    res.positive_roots.assign(r0.begin(), r0.end());
    std::sort(res.positive_roots.begin(), res.positive_roots.end(), [&](const Root& a, const Root& b) {
      int sa = 0, sb = 0;
      for (int i = 0; i < kMaxRank; ++i) {
        sa += a[i];
        sb += b[i];
      }
      if (sa != sb) return sa < sb;
      return a > b;
    });
    for (const auto& o : cl.objs) res.root_counts.push_back(o.roots.size());
  }
  return res;
}

bool has_finite_root_system(const Diagram& d, const Caps& caps) {
  Closure cl(caps, d.rank());
  return cl.run(d);
}

std::string root_str(const Root& r, int rank) {
  std::string s = "(";
  for (int i = 0; i < rank; ++i) {
    if (i) s += ",";
    s += std::to_string(r[i]);
  }
  return s + ")";
}

const char* status_name(RootStatus s) {
  switch (s) {
    case RootStatus::Finite: return "Finite";
    case RootStatus::NotAllReflections: return "NotAllReflections";
    case RootStatus::CapExceeded: return "CapExceeded";
  }
  return "?";
}

}  // namespace nichols
