#include "setrel/congruence.hpp"

#include <algorithm>

namespace setrel {

namespace {
inline void mix(std::size_t& h, std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); }

struct PairHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const {
    std::size_t h = std::hash<std::uint64_t>{}(p.first);
    mix(h, std::hash<std::uint64_t>{}(p.second));
    return h;
  }
};
}  // namespace

bool ClosureIndex::Sig::operator==(const Sig& o) const {
  return kind == o.kind && value == o.value && op->sort == o.op->sort && op->name == o.op->name && args == o.args;
}

std::size_t ClosureIndex::SigHash::operator()(const Sig& s) const {
  std::size_t h = static_cast<std::size_t>(s.kind);
  mix(h, std::hash<std::int64_t>{}(s.value));
  mix(h, std::hash<const void*>{}(s.op->sort.node()));
  if (!s.op->name.empty()) mix(h, std::hash<std::string>{}(s.op->name));
  for (Id a : s.args) mix(h, a);
  return h;
}

bool ClosureIndex::var_ctor(Term t) {
  return std::all_of(t.children().begin(), t.children().end(), [](Term c) { return c.is_var(); });
}

std::optional<ClosureIndex::Id> ClosureIndex::id_of(Term t) const {
  auto it = ids_.find(t.id());
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

ClosureIndex::Sig ClosureIndex::signature(Id n) const {
  Term t = nodes_[n].term;
  Sig s{t.kind(), t.value(), t.node(), {}};
  s.args.reserve(t.size());
  for (Term c : t.children()) s.args.push_back(root(ids_.at(c.id())));
  return s;
}

ClosureIndex::Id ClosureIndex::add_term(Term t) {
  if (auto id = id_of(t)) return *id;
  bool compound = t.size() > 0 && !t.is(Kind::Lambda);
  if (compound)
    for (Term c : t.children()) add_term(c);
  if (auto id = id_of(t)) return *id;

  Id n = static_cast<Id>(nodes_.size());
  Node node;
  node.term = t;
  node.parent = n;
  node.next = n;
  if (t.is(Kind::Tuple)) node.ctor = n;
  if (t.is(Kind::EmptySet)) node.empty = n;
  if (t.is(Kind::IntConst) || t.is(Kind::BoolConst)) node.constant = n;
  nodes_.push_back(std::move(node));
  ids_.emplace(t.id(), n);
  trail_.push_back({Undo::NewNode, n});

  if (compound) {
    for (Term c : t.children()) {
      Id r = root(ids_.at(c.id()));
      nodes_[r].uses.push_back(n);
      trail_.push_back({Undo::UsePush, r});
    }
    Sig s = signature(n);
    auto it = sigs_.find(s);
    if (it != sigs_.end()) {
      pending_.emplace_back(n, it->second);
    } else {
      sigs_.emplace(s, n);
      TrailEntry e{Undo::SigInsert};
      e.sig = std::move(s);
      trail_.push_back(std::move(e));
    }
  }
  process();
  return n;
}

void ClosureIndex::process() {
  while (!pending_.empty()) {
    auto [x, y] = pending_.back();
    pending_.pop_back();
    Id rx = root(x), ry = root(y);
    if (rx != ry) union_roots(rx, ry);
  }
}

void ClosureIndex::union_roots(Id a, Id b) {
  if (nodes_[a].size > nodes_[b].size) std::swap(a, b);
  Node& na = nodes_[a];
  Node& nb = nodes_[b];
  TrailEntry e{Undo::Union, a, b};
  e.old_ctor = nb.ctor;
  e.old_empty = nb.empty;
  e.old_constant = nb.constant;
  e.old_uses = static_cast<std::uint32_t>(nb.uses.size());
  e.old_by_set = static_cast<std::uint32_t>(nb.by_set.size());
  e.old_by_elem = static_cast<std::uint32_t>(nb.by_elem.size());
  e.old_preds = static_cast<std::uint32_t>(nb.preds.size());
  e.old_diseqs = static_cast<std::uint32_t>(nb.diseqs.size());
  trail_.push_back(std::move(e));

  na.parent = b;
  nb.size += na.size;
  std::swap(na.next, nb.next);

  if (na.ctor != kNone && nb.ctor != kNone) {
    Term ta = nodes_[na.ctor].term, tb = nodes_[nb.ctor].term;
    for (std::size_t i = 0; i < ta.size(); ++i) pending_.emplace_back(ids_.at(ta[i].id()), ids_.at(tb[i].id()));
  }
  if (na.ctor != kNone && (nb.ctor == kNone || (!var_ctor(nodes_[nb.ctor].term) && var_ctor(nodes_[na.ctor].term))))
    nb.ctor = na.ctor;
  if (nb.empty == kNone) nb.empty = na.empty;
  if (na.constant != kNone) {
    if (nb.constant == kNone) {
      nb.constant = na.constant;
    } else if (nodes_[na.constant].term != nodes_[nb.constant].term && !clash_) {
      clash_ = true;
      trail_.push_back({Undo::Conflict, na.constant, nb.constant});
    }
  }

  for (Id u : na.uses) {
    Sig s = signature(u);
    auto it = sigs_.find(s);
    if (it != sigs_.end()) {
      if (root(it->second) != root(u)) pending_.emplace_back(u, it->second);
    } else {
      sigs_.emplace(s, u);
      TrailEntry se{Undo::SigInsert};
      se.sig = std::move(s);
      trail_.push_back(std::move(se));
    }
  }
  Node& nb2 = nodes_[b];
  const Node& na2 = nodes_[a];
  nb2.uses.insert(nb2.uses.end(), na2.uses.begin(), na2.uses.end());
  nb2.by_set.insert(nb2.by_set.end(), na2.by_set.begin(), na2.by_set.end());
  nb2.by_elem.insert(nb2.by_elem.end(), na2.by_elem.begin(), na2.by_elem.end());
  nb2.preds.insert(nb2.preds.end(), na2.preds.begin(), na2.preds.end());
  nb2.diseqs.insert(nb2.diseqs.end(), na2.diseqs.begin(), na2.diseqs.end());
}

void ClosureIndex::backtrack(std::size_t mark) {
  while (trail_.size() > mark) {
    TrailEntry& e = trail_.back();
    switch (e.kind) {
      case Undo::NewNode:
        ids_.erase(nodes_[e.a].term.id());
        nodes_.pop_back();
        break;
      case Undo::Union: {
        Node& na = nodes_[e.a];
        Node& nb = nodes_[e.b];
        nb.uses.resize(e.old_uses);
        nb.by_set.resize(e.old_by_set);
        nb.by_elem.resize(e.old_by_elem);
        nb.preds.resize(e.old_preds);
        nb.diseqs.resize(e.old_diseqs);
        nb.ctor = e.old_ctor;
        nb.empty = e.old_empty;
        nb.constant = e.old_constant;
        nb.size -= na.size;
        std::swap(na.next, nb.next);
        na.parent = e.a;
        break;
      }
      case Undo::SigInsert:
        sigs_.erase(e.sig);
        break;
      case Undo::UsePush:
        nodes_[e.a].uses.pop_back();
        break;
      case Undo::MemberPush:
        members_.pop_back();
        nodes_[e.a].by_set.pop_back();
        nodes_[e.b].by_elem.pop_back();
        break;
      case Undo::PredPush:
        preds_.pop_back();
        nodes_[e.a].preds.pop_back();
        break;
      case Undo::DiseqPush:
        diseqs_.pop_back();
        nodes_[e.a].diseqs.pop_back();
        nodes_[e.b].diseqs.pop_back();
        break;
      case Undo::Conflict:
        clash_ = false;
        break;
    }
    trail_.pop_back();
  }
}

void ClosureIndex::merge(Term a, Term b) {
  Id x = add_term(a), y = add_term(b);
  pending_.emplace_back(x, y);
  process();
}

void ClosureIndex::assert_literal(const Literal& l) {
  switch (l.kind) {
    case LitKind::Member: {
      Id e = add_term(l.lhs), s = add_term(l.rhs);
      Id re = root(e), rs = root(s);
      Id idx = static_cast<Id>(members_.size());
      members_.push_back({l.lhs, l.rhs, l.positive});
      nodes_[rs].by_set.push_back(idx);
      nodes_[re].by_elem.push_back(idx);
      trail_.push_back({Undo::MemberPush, rs, re});
      return;
    }
    case LitKind::Equal:
      if (l.positive) {
        merge(l.lhs, l.rhs);
      } else {
        Id a = add_term(l.lhs), b = add_term(l.rhs);
        Id ra = root(a), rb = root(b);
        Id idx = static_cast<Id>(diseqs_.size());
        diseqs_.push_back({l.lhs, l.rhs});
        nodes_[ra].diseqs.push_back(idx);
        nodes_[rb].diseqs.push_back(idx);
        trail_.push_back({Undo::DiseqPush, ra, rb});
      }
      return;
    case LitKind::Pred: {
      Id e = add_term(l.rhs);
      Id re = root(e);
      Id idx = static_cast<Id>(preds_.size());
      preds_.push_back({l.lhs, l.rhs, l.positive});
      nodes_[re].preds.push_back(idx);
      trail_.push_back({Undo::PredPush, re});
      return;
    }
    case LitKind::Formula:
      return;
  }
}

Term ClosureIndex::find(Term t) const {
  auto id = id_of(t);
  return id ? nodes_[root(*id)].term : t;
}

bool ClosureIndex::equal(Term a, Term b) const {
  if (a == b) return true;
  auto x = id_of(a), y = id_of(b);
  return x && y && root(*x) == root(*y);
}

bool ClosureIndex::member(Term e, Term s, bool positive) const {
  auto x = id_of(e), y = id_of(s);
  if (!x || !y) return false;
  Id re = root(*x), rs = root(*y);
  const auto& by_set = nodes_[rs].by_set;
  const auto& by_elem = nodes_[re].by_elem;
  if (by_set.size() <= by_elem.size()) {
    for (Id i : by_set) {
      const auto& m = members_[i];
      if (m.positive == positive && root(ids_.at(m.elem.id())) == re) return true;
    }
  } else {
    for (Id i : by_elem) {
      const auto& m = members_[i];
      if (m.positive == positive && root(ids_.at(m.set.id())) == rs) return true;
    }
  }
  return false;
}

bool ClosureIndex::diseq(Term a, Term b) const {
  auto x = id_of(a), y = id_of(b);
  if (!x || !y) return false;
  Id ra = root(*x), rb = root(*y);
  for (Id i : nodes_[ra].diseqs) {
    const auto& d = diseqs_[i];
    Id l = root(ids_.at(d.lhs.id())), r = root(ids_.at(d.rhs.id()));
    if ((l == ra && r == rb) || (l == rb && r == ra)) return true;
  }
  return false;
}

bool ClosureIndex::pred(Term p, Term e, bool positive) const {
  auto x = id_of(e);
  if (!x) return false;
  Id re = root(*x);
  for (Id i : nodes_[re].preds) {
    const auto& q = preds_[i];
    if (q.pred == p && q.positive == positive) return true;
  }
  return false;
}

bool ClosureIndex::query(const Literal& l) const {
  switch (l.kind) {
    case LitKind::Member:
      return member(l.lhs, l.rhs, l.positive);
    case LitKind::Equal:
      return l.positive ? equal(l.lhs, l.rhs) : diseq(l.lhs, l.rhs);
    case LitKind::Pred:
      return pred(l.lhs, l.rhs, l.positive);
    case LitKind::Formula:
      return false;
  }
  return false;
}

std::optional<std::pair<Literal, Literal>> ClosureIndex::has_conflict() const {
  if (clash_) {
    for (auto it = trail_.rbegin(); it != trail_.rend(); ++it)
      if (it->kind == Undo::Conflict) {
        Term a = nodes_[it->a].term, b = nodes_[it->b].term;
        return std::make_pair(Literal::equal(a, b), Literal::equal(a, b, false));
      }
  }
  for (const auto& d : diseqs_)
    if (equal(d.lhs, d.rhs)) return std::make_pair(Literal::equal(d.lhs, d.rhs), Literal::equal(d.lhs, d.rhs, false));

  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, std::pair<int, int>, PairHash> seen;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const auto& m = members_[i];
    auto key = std::make_pair<std::uint64_t, std::uint64_t>(root(ids_.at(m.elem.id())), root(ids_.at(m.set.id())));
    auto [it, fresh] = seen.try_emplace(key, -1, -1);
    int& mine = m.positive ? it->second.first : it->second.second;
    int other = m.positive ? it->second.second : it->second.first;
    if (mine < 0) mine = static_cast<int>(i);
    if (other >= 0) {
      const auto& o = members_[other];
      Literal p = Literal::member(m.positive ? m.elem : o.elem, m.positive ? m.set : o.set, true);
      Literal n = Literal::member(m.positive ? o.elem : m.elem, m.positive ? o.set : m.set, false);
      return std::make_pair(p, n);
    }
  }
  seen.clear();
  for (std::size_t i = 0; i < preds_.size(); ++i) {
    const auto& q = preds_[i];
    auto key = std::make_pair<std::uint64_t, std::uint64_t>(q.pred.id(), root(ids_.at(q.elem.id())));
    auto [it, fresh] = seen.try_emplace(key, -1, -1);
    int& mine = q.positive ? it->second.first : it->second.second;
    int other = q.positive ? it->second.second : it->second.first;
    if (mine < 0) mine = static_cast<int>(i);
    if (other >= 0) {
      const auto& o = preds_[other];
      return std::make_pair(Literal::pred(q.pred, q.positive ? q.elem : o.elem, true),
                            Literal::pred(q.pred, q.positive ? o.elem : q.elem, false));
    }
  }
  return std::nullopt;
}

std::vector<const ClosureIndex::MemberEntry*> ClosureIndex::members_of(Term s) const {
  std::vector<const MemberEntry*> out;
  auto id = id_of(s);
  if (!id) return out;
  for (Id i : nodes_[root(*id)].by_set) out.push_back(&members_[i]);
  return out;
}

std::vector<Term> ClosureIndex::class_of(Term t) const {
  auto id = id_of(t);
  if (!id) return {t};
  std::vector<Term> out;
  Id n = *id;
  do {
    out.push_back(nodes_[n].term);
    n = nodes_[n].next;
  } while (n != *id);
  return out;
}

Term ClosureIndex::constructor(Term t) const {
  auto id = id_of(t);
  if (!id) return t.is(Kind::Tuple) ? t : Term{};
  Id c = nodes_[root(*id)].ctor;
  return c == kNone ? Term{} : nodes_[c].term;
}

bool ClosureIndex::has_empty(Term t) const {
  auto id = id_of(t);
  if (!id) return t.is(Kind::EmptySet);
  return nodes_[root(*id)].empty != kNone;
}

std::vector<Term> ClosureIndex::terms() const {
  std::vector<Term> out;
  out.reserve(nodes_.size());
  for (const Node& n : nodes_) out.push_back(n.term);
  return out;
}

std::size_t ClosureIndex::num_classes() const {
  std::size_t k = 0;
  for (Id i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].parent == i) ++k;
  return k;
}

}  // namespace setrel
