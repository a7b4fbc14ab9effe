#include "mc/word.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace mc {

ChairSet::ChairSet(const std::vector<Chair>& chairs) : universal_(false) {
  for (Chair c : chairs) {
    if (c < 1) throw BadChair("chair id must be >= 1");
    if (static_cast<size_t>(c) > mask_.size()) mask_.resize(c, 0);
    mask_[c - 1] = 1;
  }
}

ChairSet ChairSet::intersect(const std::vector<char>& keep_mask) const {
  ChairSet out;
  out.universal_ = false;
  if (universal_) {
    out.mask_ = keep_mask;
    return out;
  }
  out.mask_.assign(std::min(mask_.size(), keep_mask.size()), 0);
  for (size_t i = 0; i < out.mask_.size(); ++i)
    out.mask_[i] = mask_[i] && keep_mask[i];
  return out;
}

ChairSet ChairSet::preimage(const std::vector<Chair>& map) const {
  if (universal_) return *this;
  ChairSet out;
  out.universal_ = false;
  out.mask_.assign(map.size(), 0);
  for (size_t c = 0; c < map.size(); ++c)
    if (contains(map[c])) out.mask_[c] = 1;
  return out;
}

std::vector<Chair> ChairSet::to_chairs(int max_chair) const {
  std::vector<Chair> out;
  for (Chair c = 1; c <= max_chair; ++c)
    if (contains(c)) out.push_back(c);
  return out;
}

namespace {

void check_depth(int depth) {
  if (depth > kDepthCap)
    throw DepthCap("expression depth exceeds " + std::to_string(kDepthCap));
}

std::shared_ptr<WordExpr> make_node() {
  struct Access : WordExpr {};  // WordExpr's ctor is private
  return std::static_pointer_cast<WordExpr>(std::make_shared<Access>());
}

}  // namespace

Word literal(std::vector<Chair> letters) {
  if (letters.empty()) throw BadChair("literal must be nonempty");
  auto n = make_node();
  int maxc = 0;
  for (Chair c : letters) {
    if (c < 1) throw BadChair("chair id must be >= 1");
    maxc = std::max(maxc, c);
  }
  n->kind_ = NodeKind::Literal;
  n->length_ = letters.size();
  n->hist_.assign(maxc, BigInt(0));
  for (Chair c : letters) n->hist_[c - 1] += 1;
  n->letters_ = std::move(letters);
  n->depth_ = 1;
  return n;
}

Word concat(std::vector<Word> parts) {
  if (parts.empty()) throw BadChair("concat of zero words");
  if (parts.size() == 1) return parts[0];
  auto n = make_node();
  n->kind_ = NodeKind::Concat;
  n->length_ = 0;
  int maxc = 0, depth = 0;
  for (const Word& p : parts) {
    n->length_ += p->length();
    maxc = std::max(maxc, p->max_chair());
    depth = std::max(depth, p->depth());
  }
  n->hist_.assign(maxc, BigInt(0));
  for (const Word& p : parts)
    for (int i = 0; i < p->max_chair(); ++i) n->hist_[i] += p->hist()[i];
  n->children_ = std::move(parts);
  n->depth_ = depth + 1;
  check_depth(n->depth_);
  return n;
}

Word power(Word base, BigInt exponent) {
  if (exponent < 1) throw BadChair("power exponent must be >= 1");
  auto n = make_node();
  n->kind_ = NodeKind::Power;
  n->length_ = base->length() * exponent;
  n->hist_.resize(base->max_chair());
  for (int i = 0; i < base->max_chair(); ++i)
    n->hist_[i] = base->hist()[i] * exponent;
  n->depth_ = base->depth() + 1;
  n->base_ = std::move(base);
  n->exponent_ = std::move(exponent);
  check_depth(n->depth_);
  return n;
}

Word interleave(Chair c, Word base) {
  if (c < 1) throw BadChair("chair id must be >= 1");
  auto n = make_node();
  n->kind_ = NodeKind::Interleave;
  n->length_ = 2 * base->length();
  n->hist_.assign(std::max(c, base->max_chair()), BigInt(0));
  for (int i = 0; i < base->max_chair(); ++i) n->hist_[i] = base->hist()[i];
  n->hist_[c - 1] += base->length();
  n->inter_chair_ = c;
  n->depth_ = base->depth() + 1;
  n->base_ = std::move(base);
  check_depth(n->depth_);
  return n;
}

Word restrict_to(Word base, const std::vector<Chair>& keep) {
  if (keep.empty()) throw EmptyRestriction("empty keep set");
  std::vector<char> mask(base->max_chair(), 0);
  for (Chair c : keep) {
    if (c < 1) throw BadChair("chair id must be >= 1");
    if (c <= base->max_chair()) mask[c - 1] = 1;
  }
  auto n = make_node();
  n->kind_ = NodeKind::Restrict;
  n->length_ = 0;
  n->hist_.assign(base->max_chair(), BigInt(0));
  for (int i = 0; i < base->max_chair(); ++i)
    if (mask[i]) {
      n->hist_[i] = base->hist()[i];
      n->length_ += base->hist()[i];
    }
  if (n->length_ == 0)
    throw EmptyRestriction("restriction deletes every letter");
  while (!n->hist_.empty() && n->hist_.back() == 0) n->hist_.pop_back();
  n->keep_mask_ = std::move(mask);
  n->depth_ = base->depth() + 1;
  n->base_ = std::move(base);
  check_depth(n->depth_);
  return n;
}

Word relabel(Word base, std::vector<Chair> map) {
  if (static_cast<int>(map.size()) < base->max_chair())
    throw BadChair("relabel map does not cover the word's chairs");
  std::set<Chair> seen;
  int maxc = 0;
  for (Chair img : map) {
    if (img < 1) throw BadChair("relabel image must be >= 1");
    if (!seen.insert(img).second) throw BadChair("relabel map is not injective");
    maxc = std::max(maxc, img);
  }
  auto n = make_node();
  n->kind_ = NodeKind::Relabel;
  n->length_ = base->length();
  int max_used = 0;
  for (int i = 0; i < base->max_chair(); ++i)
    if (base->hist()[i] != 0) max_used = std::max(max_used, map[i]);
  n->hist_.assign(max_used, BigInt(0));
  for (int i = 0; i < base->max_chair(); ++i)
    if (base->hist()[i] != 0) n->hist_[map[i] - 1] = base->hist()[i];
  n->chair_map_ = std::move(map);
  n->depth_ = base->depth() + 1;
  n->base_ = std::move(base);
  check_depth(n->depth_);
  return n;
}

Word shift(Word base, int delta) {
  std::vector<Chair> map(base->max_chair());
  for (int c = 1; c <= base->max_chair(); ++c) {
    int img = c + delta;
    if (img < 1 && base->hist()[c - 1] != 0)
      throw BadChair("shift moves chair " + std::to_string(c) + " below 1");
    map[c - 1] = img < 1 ? c : img;  // unused chairs may map anywhere legal
  }
  // Re-check injectivity is preserved for the unused-chair fixups.
  std::set<Chair> seen(map.begin(), map.end());
  if (seen.size() != map.size()) {
    // fall back: map unused chairs past the used range
    int next = 0;
    for (int c = 1; c <= base->max_chair(); ++c)
      next = std::max(next, map[c - 1]);
    for (int c = 1; c <= base->max_chair(); ++c)
      if (base->hist()[c - 1] == 0) map[c - 1] = ++next;
  }
  return relabel(std::move(base), std::move(map));
}

BigInt WordExpr::count_in(const ChairSet& b) const {
  if (b.is_universal()) return length_;
  BigInt total = 0;
  for (int c = 1; c <= max_chair(); ++c)
    if (b.contains(c)) total += hist_[c - 1];
  return total;
}

BigInt WordExpr::rank_in(const ChairSet& b, const BigInt& pos) const {
  if (pos < 0 || pos > length_) throw OutOfRange("rank position out of range");
  if (b.is_universal()) return pos;
  if (pos == 0) return 0;
  if (pos == length_) return count_in(b);
  switch (kind_) {
    case NodeKind::Literal: {
      BigInt count = 0;
      long p = pos.convert_to<long>();
      for (long i = 0; i < p; ++i)
        if (b.contains(letters_[i])) ++count;
      return count;
    }
    case NodeKind::Concat: {
      BigInt remaining = pos, count = 0;
      for (const Word& ch : children_) {
        if (remaining <= 0) break;
        if (remaining >= ch->length()) {
          count += ch->count_in(b);
          remaining -= ch->length();
        } else {
          count += ch->rank_in(b, remaining);
          remaining = 0;
        }
      }
      return count;
    }
    case NodeKind::Power: {
      BigInt copies = pos / base_->length();
      BigInt rem = pos % base_->length();
      return copies * base_->count_in(b) + base_->rank_in(b, rem);
    }
    case NodeKind::Interleave: {
      // letters: c, base[0], c, base[1], ...
      BigInt pairs = pos / 2;
      BigInt count = base_->rank_in(b, pairs);
      if (b.contains(inter_chair_)) {
        count += pairs;
        if (pos % 2 == 1) count += 1;
      }
      return count;
    }
    case NodeKind::Restrict: {
      // First `pos` letters of the restricted word are the keep-letters
      // 0..pos-1 of the base.
      ChairSet keep = ChairSet::all().intersect(keep_mask_);
      BigInt cut = base_->select_pos(keep, pos - 1) + 1;
      return base_->rank_in(b.intersect(keep_mask_), cut);
    }
    case NodeKind::Relabel:
      return base_->rank_in(b.preimage(chair_map_), pos);
  }
  throw OutOfRange("unreachable");
}

BigInt WordExpr::select_pos(const ChairSet& b, const BigInt& k) const {
  if (k < 0 || k >= count_in(b)) throw OutOfRange("select rank out of range");
  if (b.is_universal()) return k;
  switch (kind_) {
    case NodeKind::Literal: {
      BigInt seen = 0;
      for (size_t i = 0; i < letters_.size(); ++i)
        if (b.contains(letters_[i])) {
          if (seen == k) return BigInt(i);
          ++seen;
        }
      throw OutOfRange("select: corrupt histogram");
    }
    case NodeKind::Concat: {
      BigInt remaining = k, offset = 0;
      for (const Word& ch : children_) {
        BigInt c = ch->count_in(b);
        if (remaining < c) return offset + ch->select_pos(b, remaining);
        remaining -= c;
        offset += ch->length();
      }
      throw OutOfRange("select: corrupt histogram");
    }
    case NodeKind::Power: {
      BigInt per = base_->count_in(b);
      BigInt copies = k / per;
      return copies * base_->length() + base_->select_pos(b, k % per);
    }
    case NodeKind::Interleave: {
      if (!b.contains(inter_chair_))
        return 2 * base_->select_pos(b, k) + 1;
      // Binary search the pair index j: pairs 0..j-1 contribute
      // j + rank_base(j) letters from B, strictly increasing in j.
      BigInt lo = 0, hi = base_->length();  // invariant: C(lo) <= k < C(hi)
      if (hi > k + 1) hi = k + 1;
      while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        BigInt c = mid + base_->rank_in(b, mid);
        if (c <= k) lo = mid; else hi = mid;
      }
      BigInt at_lo = lo + base_->rank_in(b, lo);
      if (at_lo == k) return 2 * lo;      // the interleaved chair of pair lo
      return 2 * lo + 1;                  // the base letter of pair lo
    }
    case NodeKind::Restrict: {
      ChairSet keep = ChairSet::all().intersect(keep_mask_);
      BigInt p = base_->select_pos(b.intersect(keep_mask_), k);
      return base_->rank_in(keep, p);
    }
    case NodeKind::Relabel:
      return base_->select_pos(b.preimage(chair_map_), k);
  }
  throw OutOfRange("unreachable");
}

Chair WordExpr::kth_in(const ChairSet& b, const BigInt& k) const {
  if (k < 0 || k >= count_in(b)) throw OutOfRange("index out of range");
  switch (kind_) {
    case NodeKind::Literal: {
      if (b.is_universal()) return letters_[k.convert_to<size_t>()];
      BigInt seen = 0;
      for (Chair c : letters_)
        if (b.contains(c)) {
          if (seen == k) return c;
          ++seen;
        }
      throw OutOfRange("kth_in: corrupt histogram");
    }
    case NodeKind::Concat: {
      BigInt remaining = k;
      for (const Word& ch : children_) {
        BigInt c = ch->count_in(b);
        if (remaining < c) return ch->kth_in(b, remaining);
        remaining -= c;
      }
      throw OutOfRange("kth_in: corrupt histogram");
    }
    case NodeKind::Power:
      return base_->kth_in(b, k % base_->count_in(b));
    case NodeKind::Interleave: {
      if (b.is_universal()) {
        if (k % 2 == 0) return inter_chair_;
        return base_->kth_in(b, k / 2);
      }
      if (!b.contains(inter_chair_)) return base_->kth_in(b, k);
      BigInt pos = select_pos(b, k);
      if (pos % 2 == 0) return inter_chair_;
      return base_->kth_in(ChairSet::all(), pos / 2);
    }
    case NodeKind::Restrict:
      return base_->kth_in(b.intersect(keep_mask_), k);
    case NodeKind::Relabel: {
      Chair c = base_->kth_in(b.preimage(chair_map_), k);
      return chair_map_[c - 1];
    }
  }
  throw OutOfRange("unreachable");
}

Chair WordExpr::at(const BigInt& i) const {
  if (i < 0 || i >= length_) throw OutOfRange("index out of range");
  return kth_in(ChairSet::all(), i);
}

Chair WordExpr::at_cyclic(const BigInt& i) const {
  BigInt r = i % length_;
  if (r < 0) r += length_;
  return kth_in(ChairSet::all(), r);
}

bool WordExpr::is_full(int m) const {
  if (max_chair() < m) return false;
  for (int c = 1; c <= m; ++c)
    if (hist_[c - 1] == 0) return false;
  return true;
}

void WordExpr::scan(const ChairSet& b, const std::function<bool(Chair)>& sink) const {
  if (count_in(b) == 0) return;  // prune: nothing to emit below here
  switch (kind_) {
    case NodeKind::Literal:
      for (Chair c : letters_)
        if (b.contains(c) && !sink(c)) return;
      return;
    case NodeKind::Concat:
      for (const Word& ch : children_) ch->scan(b, sink);
      return;
    case NodeKind::Power: {
      // length of one copy already bounded by the caller's cap pre-check
      for (BigInt r = 0; r < exponent_; ++r) base_->scan(b, sink);
      return;
    }
    case NodeKind::Interleave: {
      bool emit_c = b.contains(inter_chair_);
      ChairSet inner = b;
      base_->scan(ChairSet::all(), [&](Chair c) {
        if (emit_c && !sink(inter_chair_)) return false;
        if (inner.contains(c) && !sink(c)) return false;
        return true;
      });
      return;
    }
    case NodeKind::Restrict:
      base_->scan(b.intersect(keep_mask_), sink);
      return;
    case NodeKind::Relabel:
      base_->scan(b.preimage(chair_map_), [&](Chair c) {
        return sink(chair_map_[c - 1]);
      });
      return;
  }
}

Measure measure(const Word& w) { return Measure{w->length(), w->hist()}; }

std::vector<Chair> materialize(const Word& w, long cap) {
  if (w->length() > cap)
    throw TooLong("word has " + w->length().str() + " letters, cap is " +
                  std::to_string(cap));
  std::vector<Chair> out;
  out.reserve(w->length().convert_to<size_t>());
  bool stopped = false;
  w->scan(ChairSet::all(), [&](Chair c) {
    out.push_back(c);
    return true;
  });
  (void)stopped;
  return out;
}

Word prefix(const Word& w, const BigInt& len) {
  if (len < 1 || len > w->length()) throw OutOfRange("prefix length out of range");
  if (len == w->length()) return w;
  switch (w->kind()) {
    case NodeKind::Literal: {
      std::vector<Chair> head(w->letters().begin(),
                              w->letters().begin() + len.convert_to<long>());
      return literal(std::move(head));
    }
    case NodeKind::Concat: {
      std::vector<Word> parts;
      BigInt remaining = len;
      for (const Word& ch : w->children()) {
        if (remaining == 0) break;
        if (remaining >= ch->length()) {
          parts.push_back(ch);
          remaining -= ch->length();
        } else {
          parts.push_back(prefix(ch, remaining));
          remaining = 0;
        }
      }
      return concat(std::move(parts));
    }
    case NodeKind::Power: {
      BigInt copies = len / w->base()->length();
      BigInt rem = len % w->base()->length();
      std::vector<Word> parts;
      if (copies > 0) parts.push_back(copies == 1 ? w->base()
                                                  : power(w->base(), copies));
      if (rem > 0) parts.push_back(prefix(w->base(), rem));
      return parts.size() == 1 ? parts[0] : concat(std::move(parts));
    }
    case NodeKind::Interleave: {
      BigInt pairs = len / 2;
      if (len % 2 == 0) return interleave(w->inter_chair(), prefix(w->base(), pairs));
      if (pairs == 0) return literal({w->inter_chair()});
      return concat({interleave(w->inter_chair(), prefix(w->base(), pairs)),
                     literal({w->inter_chair()})});
    }
    case NodeKind::Restrict: {
      ChairSet keep = ChairSet::all().intersect(w->keep_mask());
      BigInt cut = w->base()->select_pos(keep, len - 1) + 1;
      return restrict_to(prefix(w->base(), cut),
                         keep.to_chairs(w->base()->max_chair()));
    }
    case NodeKind::Relabel:
      return relabel(prefix(w->base(), len), w->chair_map());
  }
  throw OutOfRange("unreachable");
}

namespace {

bool structural_equal_memo(const WordExpr* a, const WordExpr* b,
                           std::set<std::pair<const WordExpr*, const WordExpr*>>& memo) {
  if (a == b) return true;
  if (a->kind() != b->kind()) return false;
  if (a->length() != b->length()) return false;
  auto key = std::make_pair(a, b);
  if (memo.count(key)) return true;  // assume equal while re-visiting the pair
  memo.insert(key);
  switch (a->kind()) {
    case NodeKind::Literal:
      return a->letters() == b->letters();
    case NodeKind::Concat: {
      if (a->children().size() != b->children().size()) return false;
      for (size_t i = 0; i < a->children().size(); ++i)
        if (!structural_equal_memo(a->children()[i].get(), b->children()[i].get(), memo))
          return false;
      return true;
    }
    case NodeKind::Power:
      return a->exponent() == b->exponent() &&
             structural_equal_memo(a->base().get(), b->base().get(), memo);
    case NodeKind::Interleave:
      return a->inter_chair() == b->inter_chair() &&
             structural_equal_memo(a->base().get(), b->base().get(), memo);
    case NodeKind::Restrict:
      return a->keep_mask() == b->keep_mask() &&
             structural_equal_memo(a->base().get(), b->base().get(), memo);
    case NodeKind::Relabel:
      return a->chair_map() == b->chair_map() &&
             structural_equal_memo(a->base().get(), b->base().get(), memo);
  }
  return false;
}

Word normalize_memo(const Word& w, std::map<const WordExpr*, Word>& memo) {
  auto it = memo.find(w.get());
  if (it != memo.end()) return it->second;
  Word out;
  switch (w->kind()) {
    case NodeKind::Literal:
      out = w;
      break;
    case NodeKind::Concat: {
      std::vector<Word> flat;
      for (const Word& ch : w->children()) {
        Word c = normalize_memo(ch, memo);
        if (c->kind() == NodeKind::Concat)
          flat.insert(flat.end(), c->children().begin(), c->children().end());
        else
          flat.push_back(c);
      }
      out = concat(std::move(flat));
      break;
    }
    case NodeKind::Power: {
      Word b = normalize_memo(w->base(), memo);
      BigInt e = w->exponent();
      while (b->kind() == NodeKind::Power) {
        e *= b->exponent();
        b = b->base();
      }
      out = e == 1 ? b : power(b, e);
      break;
    }
    case NodeKind::Interleave:
      out = interleave(w->inter_chair(), normalize_memo(w->base(), memo));
      break;
    case NodeKind::Restrict:
      out = restrict_to(normalize_memo(w->base(), memo),
                        ChairSet::all().intersect(w->keep_mask())
                            .to_chairs(w->base()->max_chair()));
      break;
    case NodeKind::Relabel:
      out = relabel(normalize_memo(w->base(), memo), w->chair_map());
      break;
  }
  memo.emplace(w.get(), out);
  return out;
}

}  // namespace

bool structural_equal(const Word& a, const Word& b) {
  std::set<std::pair<const WordExpr*, const WordExpr*>> memo;
  return structural_equal_memo(a.get(), b.get(), memo);
}

Word normalize(const Word& w) {
  std::map<const WordExpr*, Word> memo;
  return normalize_memo(w, memo);
}

bool words_identical(const Word& a, const Word& b, long cap) {
  if (a->length() != b->length()) return false;
  if (a->length() <= cap)
    return materialize(a, cap) == materialize(b, cap);
  return structural_equal(normalize(a), normalize(b));
}

std::string letters_to_string(const std::vector<Chair>& letters) {
  std::ostringstream out;
  for (size_t i = 0; i < letters.size(); ++i) {
    if (i && letters[i - 1] > 9) out << ' ';
    else if (i && letters[i] > 9) out << ' ';
    out << letters[i];
  }
  return out.str();
}

}  // namespace mc
