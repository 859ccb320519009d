#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "multicat/instance.hpp"
#include "multicat/query.hpp"
#include "multicat/typecheck.hpp"
#include "multicat/value.hpp"

namespace multicat {

namespace detail {
struct StageCode;
}

/// One fold over a collection or an earlier stage's result.
struct FoldStage {
  std::string source;
  SourceKind source_kind = SourceKind::Collection;
  /// LET variable receiving this stage's result; empty for the final stage.
  std::optional<std::string> binds;
  /// The block lambda as written.
  Lambda lambda;
  /// Two-parameter normal form of `lambda`.
  Lambda combiner;
  /// Seed of the fold; always the empty list.
  Value seed = Value(List{});
  std::shared_ptr<const detail::StageCode> code;
};

struct FoldPlan {
  std::vector<FoldStage> stages;
};

/// Rewrites a single-parameter block lambda into `\x acc -> ...`, turning
/// accumulator-position `nil` into `acc` and `cons e` into `cons e acc`.
/// Two-parameter lambdas are returned unchanged.
Lambda normalize_lambda(const Lambda& lambda, const TypedQuery& typed);

FoldPlan compile(const TypedQuery& typed);

/// Right fold of every stage in order. Throws Error(RuntimeError) on
/// division by zero.
Value execute(const FoldPlan& plan, const InstanceStore& store);

/// Plain recursive interpreter over the typed AST; the oracle for
/// execute(compile(q)).
Value reference_interpret(const TypedQuery& typed, const InstanceStore& store);

/// `{stages: [{source, sourceKind, binds, lambda, combiner, combinerAst}]}`.
nlohmann::json plan_to_json(const FoldPlan& plan);
nlohmann::json expr_to_json(const Expr& e);

}  // namespace multicat
