#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace cctlab {

struct CategoryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ObjId = int;
using MorId = int;

enum class CatKind { General, Delta, Poset };
std::string to_string(CatKind k);

struct MorData {
  std::string name;
  ObjId dom = -1;
  ObjId cod = -1;
};

// A finite category with a complete composition table. Identities are part
// of the morphism list; compose(g, f) means "g after f".
class FinCat {
 public:
  FinCat() = default;
  FinCat(std::vector<std::string> objects, std::vector<MorData> morphisms,
         std::vector<MorId> identity,
         const std::map<std::pair<MorId, MorId>, MorId>& table);

  long num_objects() const { return static_cast<long>(objects_.size()); }
  long num_morphisms() const { return static_cast<long>(mors_.size()); }
  long num_non_identity() const;

  const std::string& obj_name(ObjId o) const { return objects_[static_cast<size_t>(o)]; }
  const MorData& mor(MorId m) const { return mors_[static_cast<size_t>(m)]; }
  ObjId dom(MorId m) const { return mors_[static_cast<size_t>(m)].dom; }
  ObjId cod(MorId m) const { return mors_[static_cast<size_t>(m)].cod; }
  MorId identity(ObjId o) const { return identity_[static_cast<size_t>(o)]; }
  bool is_identity(MorId m) const { return identity_[static_cast<size_t>(dom(m))] == m && dom(m) == cod(m); }

  bool composable(MorId g, MorId f) const { return cod(f) == dom(g); }
  MorId compose(MorId g, MorId f) const;  // g after f

  std::vector<MorId> hom(ObjId a, ObjId b) const;
  std::optional<ObjId> object_by_name(const std::string& n) const;
  std::optional<MorId> morphism_by_name(const std::string& n) const;

  // Checks totality and closure of the table, identity laws, dom/cod
  // consistency and associativity; throws CategoryError naming the witness.
  void validate() const;
  CatKind classify() const;

  // Unique morphism i -> j in a poset.
  MorId poset_arrow(ObjId i, ObjId j) const;

  static FinCat poset_from_relations(const std::vector<std::string>& objects,
                                     const std::vector<std::pair<int, int>>& le_pairs);
  static FinCat free_on_quiver(const std::vector<std::string>& objects,
                               const std::vector<MorData>& edges, long max_paths = 10000);

 private:
  std::vector<std::string> objects_;
  std::vector<MorData> mors_;
  std::vector<MorId> identity_;
  std::vector<MorId> table_;  // table_[g * m + f], -1 where not composable

  MorId table_at(MorId g, MorId f) const {
    return table_[static_cast<size_t>(g) * mors_.size() + static_cast<size_t>(f)];
  }
};

using CatPtr = std::shared_ptr<const FinCat>;

// A composable chain of non-identity morphisms; dimension 0 is a bare object.
struct Simplex {
  std::vector<ObjId> verts;  // dim+1 entries
  std::vector<MorId> edges;  // edges[t]: verts[t] -> verts[t+1]

  long dim() const { return static_cast<long>(edges.size()); }
  bool operator==(const Simplex& o) const { return verts == o.verts && edges == o.edges; }
  bool operator<(const Simplex& o) const {
    if (dim() != o.dim()) return dim() < o.dim();
    if (verts != o.verts) return verts < o.verts;
    return edges < o.edges;
  }
  std::string label(const FinCat& c) const;
};

// Requires a delta; grouped by dimension in the returned order.
std::vector<Simplex> nondegenerate_simplices(const FinCat& c);

struct Functor {
  CatPtr dom;
  CatPtr cod;
  std::vector<ObjId> obj_map;
  std::vector<MorId> mor_map;

  ObjId on_obj(ObjId o) const { return obj_map[static_cast<size_t>(o)]; }
  MorId on_mor(MorId m) const { return mor_map[static_cast<size_t>(m)]; }
  void validate() const;  // identities and composites are preserved
};

Functor identity_functor(const CatPtr& c);
Functor compose_functors(const Functor& g, const Functor& f);  // g after f

struct SimplexArrow {
  ObjId tau = -1;
  ObjId sigma = -1;
  MorId carrier = -1;  // the base-category map tau(0) -> sigma(0)
};

struct Subdivision {
  CatPtr base;
  CatPtr prime;
  std::vector<Simplex> simplices;                       // object i of prime
  std::map<Simplex, ObjId> object_index;
  std::vector<SimplexArrow> arrows;                     // morphism id -> triple
  std::map<std::tuple<ObjId, ObjId, MorId>, MorId> arrow_index;
  Functor to_base;                                      // prime -> base
};

// Requires classify(c) at least delta.
Subdivision subdivide(const CatPtr& c);

// The induced functor between subdivisions; rejects functors that send a
// chain edge to an identity.
Functor subdivide_functor(const Functor& f, const Subdivision& sd_dom, const Subdivision& sd_cod);

struct CommaObject {
  MorId w = -1;      // i -> f(sigma) in the target category
  ObjId sigma = -1;  // object of the source category
};

struct CommaCat {
  CatPtr cat;
  std::vector<CommaObject> objects;
  std::map<std::pair<MorId, ObjId>, ObjId> object_index;
  std::vector<MorId> carrier;  // morphism id -> underlying source-category map
  std::map<std::tuple<ObjId, ObjId, MorId>, MorId> arrow_index;
};

CommaCat comma_category(const Functor& f, ObjId i);

// For v: h -> i, the re-indexing i/f -> h/f, (w, sigma) |-> (w v, sigma).
Functor comma_reindex(const Functor& f, MorId v, const CommaCat& from_i, const CommaCat& to_h);

}  // namespace cctlab
