#include "mella/kernel/basis.hpp"

#include <cassert>

#include "mella/kernel/builder.hpp"
#include "mella/kernel/check.hpp"

namespace mella::kernel {

namespace {

using V = Builder::Var;

Definition make_elim_j() {
  Builder b;
  // (A : *) (C : (x y : A) -> Id A x y -> *) -> ((x : A) -> C x x refl)
  //   -> (x y : A) (P : Id A x y) -> C x y P
  Term type = b.pi("A", Term::star(), [&](V A) {
    Term motive = b.pi("x", b(A), [&](V x) {
      return b.pi("y", b(A), [&](V y) {
        return b.arrow(Term::id(b(A), b(x), b(y)), [&] { return Term::star(); });
      });
    });
    return b.pi("C", motive, [&](V C) {
      Term base = b.pi("x", b(A), [&](V x) {
        return Term::app(b(C), {b(x), b(x), Term::refl()});
      });
      return b.pi("e", base, [&](V) {
        return b.pi("x", b(A), [&](V x) {
          return b.pi("y", b(A), [&](V y) {
            return b.pi("P", Term::id(b(A), b(x), b(y)),
                        [&](V P) { return Term::app(b(C), {b(x), b(y), b(P)}); });
          });
        });
      });
    });
  });
  Builder c;
  Term body = c.lam("A", [&](V A) {
    return c.lam("C", [&](V C) {
      return c.lam("e", [&](V e) {
        return c.lam("x", [&](V x) {
          return c.lam("y", [&](V y) {
            return c.lam("P", [&](V P) {
              return Term::j({c(A), c(C), c(e), c(x), c(y), c(P)});
            });
          });
        });
      });
    });
  });
  return {"elimJ", type, body};
}

Definition make_sym() {
  Builder b;
  Term type = b.pi("A", Term::star(), [&](V A) {
    return b.pi("a", b(A), [&](V a) {
      return b.pi("b", b(A), [&](V bb) {
        return b.arrow(Term::id(b(A), b(a), b(bb)),
                       [&] { return Term::id(b(A), b(bb), b(a)); });
      });
    });
  });
  Builder c;
  Term body = c.lam("A", [&](V A) {
    return c.lam("a", [&](V a) {
      return c.lam("b", [&](V bb) {
        return c.lam("p", [&](V p) {
          Term motive = c.lam("x", [&](V x) {
            return c.lam("y", [&](V y) {
              return c.lam("_", [&](V) { return Term::id(c(A), c(y), c(x)); });
            });
          });
          Term base = c.lam("x", [&](V) { return Term::refl(); });
          return Term::j({c(A), motive, base, c(a), c(bb), c(p)});
        });
      });
    });
  });
  return {"sym", type, body};
}

Definition make_trans() {
  Builder b;
  Term type = b.pi("A", Term::star(), [&](V A) {
    return b.pi("a", b(A), [&](V a) {
      return b.pi("b", b(A), [&](V bb) {
        return b.pi("c", b(A), [&](V cc) {
          return b.arrow(Term::id(b(A), b(a), b(bb)), [&] {
            return b.arrow(Term::id(b(A), b(bb), b(cc)),
                           [&] { return Term::id(b(A), b(a), b(cc)); });
          });
        });
      });
    });
  });
  Builder c;
  Term body = c.lam("A", [&](V A) {
    return c.lam("a", [&](V a) {
      return c.lam("b", [&](V bb) {
        return c.lam("c", [&](V cc) {
          return c.lam("p", [&](V p) {
            return c.lam("q", [&](V q) {
              // C x y _ = (z : A) -> Id A y z -> Id A x z
              Term motive = c.lam("x", [&](V x) {
                return c.lam("y", [&](V y) {
                  return c.lam("_", [&](V) {
                    return c.pi("z", c(A), [&](V z) {
                      return c.arrow(Term::id(c(A), c(y), c(z)),
                                     [&] { return Term::id(c(A), c(x), c(z)); });
                    });
                  });
                });
              });
              Term base = c.lam("x", [&](V) {
                return c.lam("z", [&](V) { return c.lam("r", [&](V r) { return c(r); }); });
              });
              return Term::app(Term::j({c(A), motive, base, c(a), c(bb), c(p)}), {c(cc), c(q)});
            });
          });
        });
      });
    });
  });
  return {"trans", type, body};
}

Definition make_cong() {
  Builder b;
  Term type = b.pi("A", Term::star(), [&](V A) {
    return b.pi("B", Term::star(), [&](V B) {
      return b.pi("a", b(A), [&](V a) {
        return b.pi("b", b(A), [&](V bb) {
          Term fn_type = b.arrow(b(A), [&] { return b(B); });
          return b.pi("f", fn_type, [&](V f) {
            return b.arrow(Term::id(b(A), b(a), b(bb)), [&] {
              return Term::id(b(B), Term::app(b(f), b(a)), Term::app(b(f), b(bb)));
            });
          });
        });
      });
    });
  });
  Builder c;
  Term body = c.lam("A", [&](V A) {
    return c.lam("B", [&](V B) {
      return c.lam("a", [&](V a) {
        return c.lam("b", [&](V bb) {
          return c.lam("f", [&](V f) {
            return c.lam("p", [&](V p) {
              Term motive = c.lam("x", [&](V x) {
                return c.lam("y", [&](V y) {
                  return c.lam("_", [&](V) {
                    return Term::id(c(B), Term::app(c(f), c(x)), Term::app(c(f), c(y)));
                  });
                });
              });
              Term base = c.lam("x", [&](V) { return Term::refl(); });
              return Term::j({c(A), motive, base, c(a), c(bb), c(p)});
            });
          });
        });
      });
    });
  });
  return {"cong", type, body};
}

Definition make_subst() {
  Builder b;
  Term type = b.pi("A", Term::star(), [&](V A) {
    Term pred = b.arrow(b(A), [&] { return Term::star(); });
    return b.pi("P", pred, [&](V P) {
      return b.pi("a", b(A), [&](V a) {
        return b.pi("b", b(A), [&](V bb) {
          return b.arrow(Term::id(b(A), b(a), b(bb)), [&] {
            return b.arrow(Term::app(b(P), b(a)), [&] { return Term::app(b(P), b(bb)); });
          });
        });
      });
    });
  });
  Builder c;
  Term body = c.lam("A", [&](V A) {
    return c.lam("P", [&](V P) {
      return c.lam("a", [&](V a) {
        return c.lam("b", [&](V bb) {
          return c.lam("p", [&](V p) {
            Term motive = c.lam("x", [&](V x) {
              return c.lam("y", [&](V y) {
                return c.lam("_", [&](V) {
                  return c.arrow(Term::app(c(P), c(x)), [&] { return Term::app(c(P), c(y)); });
                });
              });
            });
            Term base = c.lam("x", [&](V) { return c.lam("h", [&](V h) { return c(h); }); });
            return Term::j({c(A), motive, base, c(a), c(bb), c(p)});
          });
        });
      });
    });
  });
  return {"subst", type, body};
}

}  // namespace

const std::vector<Definition>& equational_basis() {
  static const std::vector<Definition> basis = {make_elim_j(), make_sym(), make_trans(),
                                                make_cong(), make_subst()};
  return basis;
}

void install_basis(NamedContext& gamma) {
  for (const auto& def : equational_basis()) {
    CheckState st;
    st.named = gamma;
    infer_sort(st, def.type);
    check(st, def.body, def.type);
    gamma.insert(def.name, Binding{def.body, def.type});
  }
}

}  // namespace mella::kernel
