#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>

#include "natlog/errors.hpp"
#include "natlog/llfgen.hpp"

namespace natlog {

namespace {

constexpr std::size_t kMaxOrders = 5000;

using Path = std::vector<int>;  // 0 = function/body, 1 = argument

const Term& at(const Term& t, const Path& p, std::size_t len) {
  const Term* cur = &t;
  for (std::size_t i = 0; i < len; ++i) {
    if (cur->is_app()) cur = p[i] == 0 ? &cur->fun() : &cur->arg();
    else cur = &cur->body();
  }
  return *cur;
}

Term replace_at(const Term& t, const Path& p, std::size_t i, const Term& v) {
  if (i == p.size()) return v;
  if (t.is_app())
    return p[i] == 0 ? Term::app(replace_at(t.fun(), p, i + 1, v), t.arg()) : Term::app(t.fun(), replace_at(t.arg(), p, i + 1, v));
  if (t.is_lam()) return Term::lam(t.name(), t.type(), replace_at(t.body(), p, i + 1, v));
  return Term::type_change(t.type(), replace_at(t.body(), p, i + 1, v));
}

std::string placeholder(int id) { return "_q" + std::to_string(id); }

bool is_s(const Type& t) { return t.is_atomic("s"); }
bool is_vp(const Type& t) { return t.is_fun() && t.arg() == Type::np() && is_s(t.result()); }

struct Site {
  int host;  // 0 = sentence skeleton, k = restrictor of QNP k-1
  Path path;
  bool operator==(const Site& o) const { return host == o.host && path == o.path; }
  bool operator<(const Site& o) const { return std::tie(host, path) < std::tie(o.host, o.path); }
};

struct Qnp {
  Term det;
  int host;
  Path path;  // position of the placeholder in its host
  int surface;
  std::vector<Site> chain;  // candidate sites, lowest first
};

class Raiser {
 public:
  Raiser(const Signature& sig) : sig_(sig) {}

  std::vector<Term> run(const Term& t, int cap) {
    hosts_.push_back(Term());
    Path p;
    hosts_[0] = extract(t, 0, p, false);
    for (std::size_t j = 0; j < qnps_.size(); ++j) chain_of(static_cast<int>(j));

    std::vector<std::vector<int>> groups;
    std::map<Site, int> group_of_top;
    std::vector<int> by_surface(qnps_.size());
    std::iota(by_surface.begin(), by_surface.end(), 0);
    std::stable_sort(by_surface.begin(), by_surface.end(), [&](int a, int b) { return qnps_[a].surface < qnps_[b].surface; });
    for (int j : by_surface) {
      if (qnps_[j].chain.empty()) continue;
      const Site& top = qnps_[j].chain.back();
      auto [it, fresh] = group_of_top.emplace(top, static_cast<int>(groups.size()));
      if (fresh) groups.emplace_back();
      groups[it->second].push_back(j);
    }

    std::vector<std::vector<std::vector<int>>> orders;
    for (const auto& g : groups) orders.push_back(scope_orders(g));

    std::vector<Term> out;
    std::vector<std::size_t> odo(groups.size(), 0);
    for (std::size_t tries = 0; tries < kMaxOrders && static_cast<int>(out.size()) < cap; ++tries) {
      std::vector<std::vector<int>> choice;
      for (std::size_t g = 0; g < groups.size(); ++g) choice.push_back(orders[g][odo[g]]);
      if (auto r = reading(choice)) {
        if (std::find(out.begin(), out.end(), *r) == out.end()) out.push_back(*r);
      }
      if (!advance(odo, orders)) break;
    }
    return out;
  }

 private:
  // Lexicographic step over the per-group order lists, last group fastest.
  static bool advance(std::vector<std::size_t>& odo, const std::vector<std::vector<std::vector<int>>>& orders) {
    for (std::size_t g = odo.size(); g-- > 0;) {
      if (++odo[g] < orders[g].size()) return true;
      odo[g] = 0;
    }
    return false;
  }

  bool is_qnp(const Term& t) const {
    if (!t.is_app() || !t.fun().is_const()) return false;
    const Term& d = t.fun();
    return erase_features(d.type()) == Type::fun(Type::n(), Type::np()) && sig_.is_quantifier(d.name());
  }

  Term extract(const Term& t, int host, Path& path, bool arg_position) {
    if (arg_position && is_qnp(t)) {
      bool closed = true;
      for (const auto& v : free_vars(t))
        if (v.rfind("_q", 0) != 0) closed = false;
      if (closed) {
        int id = static_cast<int>(qnps_.size());
        qnps_.push_back(Qnp{t.fun(), host, path, min_index(t), {}});
        hosts_.push_back(Term());
        Path rp;
        Term restr = extract(t.arg(), id + 1, rp, false);
        hosts_[id + 1] = restr;
        return Term::var(placeholder(id), Type::np());
      }
    }
    switch (t.kind()) {
      case Term::Kind::kApp: {
        path.push_back(0);
        Term f = extract(t.fun(), host, path, false);
        path.back() = 1;
        Term a = extract(t.arg(), host, path, true);
        path.pop_back();
        return Term::app(f, a);
      }
      case Term::Kind::kLam: {
        path.push_back(0);
        Term b = extract(t.body(), host, path, false);
        path.pop_back();
        return Term::lam(t.name(), t.type(), b);
      }
      default:
        return t;
    }
  }

  const std::vector<Site>& chain_of(int j) {
    Qnp& q = qnps_[j];
    if (!q.chain.empty() || done_.count(j)) return q.chain;
    done_.insert(j);
    const Term& host = hosts_[q.host];
    std::vector<Site> chain;
    for (std::size_t len = q.path.size(); len-- > 0;) {
      Type ty = type_of(at(host, q.path, len));
      if (erase_features(ty) == Type::n()) break;
      if (is_s(ty) || is_vp(ty)) chain.push_back(Site{q.host, Path(q.path.begin(), q.path.begin() + len)});
      if (is_s(ty)) break;
    }
    if (chain.empty() && q.host > 0) chain = chain_of(q.host - 1);
    qnps_[j].chain = chain;
    return qnps_[j].chain;
  }

  // Orders list QNP ids widest scope first.
  static std::vector<std::vector<int>> scope_orders(const std::vector<int>& surface) {
    std::vector<std::vector<int>> out{surface};
    std::vector<int> inv(surface.rbegin(), surface.rend());
    if (inv != surface) out.push_back(inv);
    std::vector<int> idx(surface.size());
    std::iota(idx.begin(), idx.end(), 0);
    while (std::next_permutation(idx.begin(), idx.end()) && out.size() < kMaxOrders) {
      std::vector<int> perm;
      for (int i : idx) perm.push_back(surface[i]);
      if (perm != inv) out.push_back(perm);
    }
    return out;
  }

  // Position of a site expressed in another host, climbing through the
  // placeholders of the containing QNPs.
  bool ancestor_or_equal(const Site& x, Site y) const {
    while (y.host != x.host) {
      if (y.host == 0) return false;
      const Qnp& c = qnps_[y.host - 1];
      y = Site{c.host, c.path};
    }
    return x.path.size() <= y.path.size() && std::equal(x.path.begin(), x.path.end(), y.path.begin());
  }

  std::optional<Term> reading(const std::vector<std::vector<int>>& choice) {
    placed_.clear();
    for (const auto& order : choice) {
      const Site* prev = nullptr;
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto& chain = qnps_[*it].chain;
        const Site* site = &chain.back();
        if (!prev) {
          site = &chain.front();
        } else {
          for (const auto& s : chain)
            if (ancestor_or_equal(s, *prev)) {
              site = &s;
              break;
            }
        }
        placed_[*site].insert(placed_[*site].begin(), *it);
        prev = site;
      }
    }
    built_.clear();
    Term t = build_host(0);
    for (std::size_t j = 0; j < qnps_.size(); ++j)
      if (qnps_[j].chain.empty())
        t = substitute(t, placeholder(static_cast<int>(j)), Term::app(qnps_[j].det, build_host(static_cast<int>(j) + 1)));
    for (const auto& v : free_vars(t))
      if (v.rfind("_q", 0) == 0) return std::nullopt;  // a restrictor escaped its binder
    Term r = canonicalize(eta_reduce(beta_normalize(t)));
    if (!well_typed(r)) return std::nullopt;
    return r;
  }

  Term build_host(int h) {
    if (auto it = built_.find(h); it != built_.end()) return it->second;
    Term t = hosts_[h];
    std::vector<std::pair<Site, std::vector<int>>> here;
    for (const auto& [s, qs] : placed_)
      if (s.host == h) here.emplace_back(s, qs);
    std::stable_sort(here.begin(), here.end(), [](const auto& a, const auto& b) { return a.first.path.size() > b.first.path.size(); });
    for (const auto& [site, qs] : here) {
      Term sub = at(t, site.path, site.path.size());
      Type ty = type_of(sub);
      bool vp = !is_s(ty);
      std::string feature = vp ? ty.result().feature() : ty.feature();
      std::string z = "_z" + std::to_string(++fresh_);
      Term body = vp ? Term::app(sub, Term::var(z, Type::np())) : sub;
      for (auto it = qs.rbegin(); it != qs.rend(); ++it) {
        const Qnp& q = qnps_[*it];
        Term det = Term::constant(q.det.name(), Type::q(feature), q.det.attrs());
        Term qterm = Term::app(det, build_host(*it + 1));
        body = Term::app(qterm, Term::lam(placeholder(*it), Type::np(), body));
      }
      if (vp) body = Term::lam(z, Type::np(), body);
      t = replace_at(t, site.path, 0, body);
    }
    built_[h] = t;
    return t;
  }

  const Signature& sig_;
  std::vector<Term> hosts_;
  std::vector<Qnp> qnps_;
  std::set<int> done_;
  std::map<Site, std::vector<int>> placed_;
  std::map<int, Term> built_;
  int fresh_ = 0;
};

}  // namespace

std::vector<Term> type_raise(const Term& t, const Signature& sig, int scope_cap) {
  if (scope_cap < 1) throw ConfigError("scope cap must be positive");
  auto out = Raiser(sig).run(t, scope_cap);
  if (out.empty()) out.push_back(canonicalize(eta_reduce(beta_normalize(t))));
  return out;
}

}  // namespace natlog
