// Maximum-weight general matching with blossoms (Edmonds; Galil's O(n^3)
// bookkeeping). Structure follows the well-known primal-dual formulation
// with S/T labels, nested blossoms and four kinds of dual updates.

#include "cubenorm/cube.hpp"
#include "cubenorm/matching.hpp"

#include <algorithm>
#include <optional>

namespace cubenorm::detail {

namespace {

class BlossomSolver {
 public:
  BlossomSolver(std::size_t n, const std::vector<std::tuple<long, long, long long>>& edges,
                bool max_cardinality)
      : n_(static_cast<long>(n)), edges_(edges), max_cardinality_(max_cardinality) {
    const long nedge = static_cast<long>(edges_.size());
    long long max_weight = 0;
    for (const auto& [i, j, wt] : edges_) max_weight = std::max(max_weight, wt);
    endpoint_.resize(2 * nedge);
    for (long k = 0; k < nedge; ++k) {
      endpoint_[2 * k] = std::get<0>(edges_[k]);
      endpoint_[2 * k + 1] = std::get<1>(edges_[k]);
    }
    neighbend_.resize(n_);
    for (long k = 0; k < nedge; ++k) {
      const auto [i, j, wt] = edges_[k];
      neighbend_[i].push_back(2 * k + 1);
      neighbend_[j].push_back(2 * k);
    }
    mate_.assign(n_, -1);
    label_.assign(2 * n_, 0);
    labelend_.assign(2 * n_, -1);
    inblossom_.resize(n_);
    for (long v = 0; v < n_; ++v) inblossom_[v] = v;
    blossomparent_.assign(2 * n_, -1);
    blossomchilds_.assign(2 * n_, {});
    blossomendps_.assign(2 * n_, {});
    blossombase_.assign(2 * n_, -1);
    for (long v = 0; v < n_; ++v) blossombase_[v] = v;
    bestedge_.assign(2 * n_, -1);
    blossombestedges_.assign(2 * n_, std::nullopt);
    for (long b = 2 * n_ - 1; b >= n_; --b) unused_.push_back(b);
    dualvar_.assign(2 * n_, 0);
    for (long v = 0; v < n_; ++v) dualvar_[v] = max_weight;
    allowedge_.assign(nedge, false);
  }

  std::vector<long> solve();

 private:
  long long slack(long k) const {
    const auto& [i, j, wt] = edges_[k];
    return dualvar_[i] + dualvar_[j] - 2 * wt;
  }

  void leaves(long b, std::vector<long>& out) const {
    if (b < n_) {
      out.push_back(b);
      return;
    }
    for (long t : blossomchilds_[b]) leaves(t, out);
  }
  std::vector<long> leaves(long b) const {
    std::vector<long> out;
    leaves(b, out);
    return out;
  }

  static long wrap(long j, std::size_t len) {
    const long l = static_cast<long>(len);
    return ((j % l) + l) % l;
  }

  void assign_label(long w, int t, long p);
  long scan_blossom(long v, long w);
  void add_blossom(long base, long k);
  void expand_blossom(long b, bool endstage);
  void augment_blossom(long b, long v);
  void augment_matching(long k);

  long n_;
  const std::vector<std::tuple<long, long, long long>>& edges_;
  bool max_cardinality_;

  std::vector<long> endpoint_;
  std::vector<std::vector<long>> neighbend_;
  std::vector<long> mate_;
  std::vector<int> label_;
  std::vector<long> labelend_;
  std::vector<long> inblossom_;
  std::vector<long> blossomparent_;
  std::vector<std::vector<long>> blossomchilds_;
  std::vector<std::vector<long>> blossomendps_;
  std::vector<long> blossombase_;
  std::vector<long> bestedge_;
  std::vector<std::optional<std::vector<long>>> blossombestedges_;
  std::vector<long> unused_;
  std::vector<long long> dualvar_;
  std::vector<bool> allowedge_;
  std::vector<long> queue_;
};

void BlossomSolver::assign_label(long w, int t, long p) {
  const long b = inblossom_[w];
  label_[w] = label_[b] = t;
  labelend_[w] = labelend_[b] = p;
  bestedge_[w] = bestedge_[b] = -1;
  if (t == 1) {
    leaves(b, queue_);
  } else if (t == 2) {
    const long base = blossombase_[b];
    assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
  }
}

long BlossomSolver::scan_blossom(long v, long w) {
  std::vector<long> path;
  long base = -1;
  while (v != -1 || w != -1) {
    long b = inblossom_[v];
    if (label_[b] & 4) {
      base = blossombase_[b];
      break;
    }
    path.push_back(b);
    label_[b] = 5;
    if (labelend_[b] == -1) {
      v = -1;
    } else {
      v = endpoint_[labelend_[b]];
      b = inblossom_[v];
      v = endpoint_[labelend_[b]];
    }
    if (w != -1) std::swap(v, w);
  }
  for (long b : path) label_[b] = 1;
  return base;
}

void BlossomSolver::add_blossom(long base, long k) {
  long v = std::get<0>(edges_[k]);
  long w = std::get<1>(edges_[k]);
  const long bb = inblossom_[base];
  long bv = inblossom_[v];
  long bw = inblossom_[w];
  const long b = unused_.back();
  unused_.pop_back();
  blossombase_[b] = base;
  blossomparent_[b] = -1;
  blossomparent_[bb] = b;
  std::vector<long> path, endps;
  while (bv != bb) {
    blossomparent_[bv] = b;
    path.push_back(bv);
    endps.push_back(labelend_[bv]);
    v = endpoint_[labelend_[bv]];
    bv = inblossom_[v];
  }
  path.push_back(bb);
  std::reverse(path.begin(), path.end());
  std::reverse(endps.begin(), endps.end());
  endps.push_back(2 * k);
  while (bw != bb) {
    blossomparent_[bw] = b;
    path.push_back(bw);
    endps.push_back(labelend_[bw] ^ 1);
    w = endpoint_[labelend_[bw]];
    bw = inblossom_[w];
  }
  blossomchilds_[b] = path;
  blossomendps_[b] = endps;
  label_[b] = 1;
  labelend_[b] = labelend_[bb];
  dualvar_[b] = 0;
  for (long leaf : leaves(b)) {
    if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
    inblossom_[leaf] = b;
  }
  std::vector<long> bestedgeto(2 * n_, -1);
  for (long sub : path) {
    std::vector<std::vector<long>> nblists;
    if (!blossombestedges_[sub]) {
      for (long leaf : leaves(sub)) {
        std::vector<long> ks;
        for (long p : neighbend_[leaf]) ks.push_back(p / 2);
        nblists.push_back(std::move(ks));
      }
    } else {
      nblists.push_back(*blossombestedges_[sub]);
    }
    for (const auto& nblist : nblists) {
      for (long kk : nblist) {
        long i = std::get<0>(edges_[kk]);
        long j = std::get<1>(edges_[kk]);
        if (inblossom_[j] == b) std::swap(i, j);
        const long bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 &&
            (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj])))
          bestedgeto[bj] = kk;
      }
    }
    blossombestedges_[sub].reset();
    bestedge_[sub] = -1;
  }
  std::vector<long> best;
  for (long kk : bestedgeto)
    if (kk != -1) best.push_back(kk);
  bestedge_[b] = -1;
  for (long kk : best)
    if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
  blossombestedges_[b] = std::move(best);
}

void BlossomSolver::expand_blossom(long b, bool endstage) {
  for (long s : blossomchilds_[b]) {
    blossomparent_[s] = -1;
    if (s < n_) {
      inblossom_[s] = s;
    } else if (endstage && dualvar_[s] == 0) {
      expand_blossom(s, endstage);
    } else {
      for (long leaf : leaves(s)) inblossom_[leaf] = s;
    }
  }
  if (!endstage && label_[b] == 2) {
    auto& childs = blossomchilds_[b];
    auto& endps = blossomendps_[b];
    const long entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
    long j = std::find(childs.begin(), childs.end(), entrychild) - childs.begin();
    long jstep, endptrick;
    if (j & 1) {
      j -= static_cast<long>(childs.size());
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    long p = labelend_[b];
    while (j != 0) {
      label_[endpoint_[p ^ 1]] = 0;
      label_[endpoint_[endps[wrap(j - endptrick, endps.size())] ^ endptrick ^ 1]] = 0;
      assign_label(endpoint_[p ^ 1], 2, p);
      allowedge_[endps[wrap(j - endptrick, endps.size())] / 2] = true;
      j += jstep;
      p = endps[wrap(j - endptrick, endps.size())] ^ endptrick;
      allowedge_[p / 2] = true;
      j += jstep;
    }
    long bv = childs[wrap(j, childs.size())];
    label_[endpoint_[p ^ 1]] = label_[bv] = 2;
    labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
    bestedge_[bv] = -1;
    j += jstep;
    while (childs[wrap(j, childs.size())] != entrychild) {
      bv = childs[wrap(j, childs.size())];
      if (label_[bv] == 1) {
        j += jstep;
        continue;
      }
      long found = -1;
      for (long leaf : leaves(bv)) {
        if (label_[leaf] != 0) {
          found = leaf;
          break;
        }
      }
      if (found != -1) {
        label_[found] = 0;
        label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
        assign_label(found, 2, labelend_[found]);
      }
      j += jstep;
    }
  }
  label_[b] = -1;
  labelend_[b] = -1;
  blossomchilds_[b].clear();
  blossomendps_[b].clear();
  blossombase_[b] = -1;
  blossombestedges_[b].reset();
  bestedge_[b] = -1;
  unused_.push_back(b);
}

void BlossomSolver::augment_blossom(long b, long v) {
  long t = v;
  while (blossomparent_[t] != b) t = blossomparent_[t];
  if (t >= n_) augment_blossom(t, v);
  auto& childs = blossomchilds_[b];
  auto& endps = blossomendps_[b];
  const long i = std::find(childs.begin(), childs.end(), t) - childs.begin();
  long j = i;
  long jstep, endptrick;
  if (i & 1) {
    j -= static_cast<long>(childs.size());
    jstep = 1;
    endptrick = 0;
  } else {
    jstep = -1;
    endptrick = 1;
  }
  while (j != 0) {
    j += jstep;
    t = childs[wrap(j, childs.size())];
    const long p = endps[wrap(j - endptrick, endps.size())] ^ endptrick;
    if (t >= n_) augment_blossom(t, endpoint_[p]);
    j += jstep;
    t = childs[wrap(j, childs.size())];
    if (t >= n_) augment_blossom(t, endpoint_[p ^ 1]);
    mate_[endpoint_[p]] = p ^ 1;
    mate_[endpoint_[p ^ 1]] = p;
  }
  std::rotate(childs.begin(), childs.begin() + i, childs.end());
  std::rotate(endps.begin(), endps.begin() + i, endps.end());
  blossombase_[b] = blossombase_[childs[0]];
}

void BlossomSolver::augment_matching(long k) {
  const long v = std::get<0>(edges_[k]);
  const long w = std::get<1>(edges_[k]);
  for (auto [s, p] : {std::pair<long, long>{v, 2 * k + 1}, std::pair<long, long>{w, 2 * k}}) {
    while (true) {
      const long bs = inblossom_[s];
      if (bs >= n_) augment_blossom(bs, s);
      mate_[s] = p;
      if (labelend_[bs] == -1) break;
      const long t = endpoint_[labelend_[bs]];
      const long bt = inblossom_[t];
      s = endpoint_[labelend_[bt]];
      const long j = endpoint_[labelend_[bt] ^ 1];
      if (bt >= n_) augment_blossom(bt, j);
      mate_[j] = labelend_[bt];
      p = labelend_[bt] ^ 1;
    }
  }
}

std::vector<long> BlossomSolver::solve() {
  const long nedge = static_cast<long>(edges_.size());
  for (long stage = 0; stage < n_; ++stage) {
    std::fill(label_.begin(), label_.end(), 0);
    std::fill(bestedge_.begin(), bestedge_.end(), -1);
    for (long b = n_; b < 2 * n_; ++b) blossombestedges_[b].reset();
    std::fill(allowedge_.begin(), allowedge_.end(), false);
    queue_.clear();
    for (long v = 0; v < n_; ++v)
      if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);

    bool augmented = false;
    while (true) {
      while (!queue_.empty() && !augmented) {
        const long v = queue_.back();
        queue_.pop_back();
        for (long p : neighbend_[v]) {
          const long k = p / 2;
          const long w = endpoint_[p];
          if (inblossom_[v] == inblossom_[w]) continue;
          long long kslack = 0;
          if (!allowedge_[k]) {
            kslack = slack(k);
            if (kslack <= 0) allowedge_[k] = true;
          }
          if (allowedge_[k]) {
            if (label_[inblossom_[w]] == 0) {
              assign_label(w, 2, p ^ 1);
            } else if (label_[inblossom_[w]] == 1) {
              const long base = scan_blossom(v, w);
              if (base >= 0) {
                add_blossom(base, k);
              } else {
                augment_matching(k);
                augmented = true;
                break;
              }
            } else if (label_[w] == 0) {
              label_[w] = 2;
              labelend_[w] = p ^ 1;
            }
          } else if (label_[inblossom_[w]] == 1) {
            const long b = inblossom_[v];
            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
          } else if (label_[w] == 0) {
            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
          }
        }
      }
      if (augmented) break;

      int deltatype = -1;
      long long delta = 0;
      long deltaedge = -1, deltablossom = -1;
      if (!max_cardinality_) {
        deltatype = 1;
        delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + n_);
      }
      for (long v = 0; v < n_; ++v) {
        if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
          const long long d = slack(bestedge_[v]);
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 2;
            deltaedge = bestedge_[v];
          }
        }
      }
      for (long b = 0; b < 2 * n_; ++b) {
        if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
          const long long d = slack(bestedge_[b]) / 2;
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 3;
            deltaedge = bestedge_[b];
          }
        }
      }
      for (long b = n_; b < 2 * n_; ++b) {
        if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
            (deltatype == -1 || dualvar_[b] < delta)) {
          delta = dualvar_[b];
          deltatype = 4;
          deltablossom = b;
        }
      }
      if (deltatype == -1) {
        deltatype = 1;
        delta = std::max<long long>(0, *std::min_element(dualvar_.begin(), dualvar_.begin() + n_));
      }

      for (long v = 0; v < n_; ++v) {
        if (label_[inblossom_[v]] == 1)
          dualvar_[v] -= delta;
        else if (label_[inblossom_[v]] == 2)
          dualvar_[v] += delta;
      }
      for (long b = n_; b < 2 * n_; ++b) {
        if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
          if (label_[b] == 1)
            dualvar_[b] += delta;
          else if (label_[b] == 2)
            dualvar_[b] -= delta;
        }
      }

      if (deltatype == 1) {
        break;
      } else if (deltatype == 2) {
        allowedge_[deltaedge] = true;
        long i = std::get<0>(edges_[deltaedge]);
        long j = std::get<1>(edges_[deltaedge]);
        if (label_[inblossom_[i]] == 0) std::swap(i, j);
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allowedge_[deltaedge] = true;
        queue_.push_back(std::get<0>(edges_[deltaedge]));
      } else {
        expand_blossom(deltablossom, false);
      }
    }
    if (!augmented) break;
    for (long b = n_; b < 2 * n_; ++b) {
      if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 &&
          dualvar_[b] == 0)
        expand_blossom(b, true);
    }
  }
  (void)nedge;
  std::vector<long> mate(n_, -1);
  for (long v = 0; v < n_; ++v)
    if (mate_[v] >= 0) mate[v] = endpoint_[mate_[v]];
  return mate;
}

}  // namespace

std::vector<long> max_weight_matching(std::size_t n,
                                      const std::vector<std::tuple<long, long, long long>>& edges,
                                      bool max_cardinality) {
  if (edges.empty()) return std::vector<long>(n, -1);
  // Doubling keeps every dual update integral (slack/2 on S-S edges).
  std::vector<std::tuple<long, long, long long>> doubled;
  doubled.reserve(edges.size());
  for (const auto& [i, j, wt] : edges) {
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= n || static_cast<std::size_t>(j) >= n ||
        i == j)
      throw CubeError("invalid edge for matching");
    doubled.emplace_back(i, j, 2 * wt);
  }
  BlossomSolver solver(n, doubled, max_cardinality);
  return solver.solve();
}

}  // namespace cubenorm::detail
