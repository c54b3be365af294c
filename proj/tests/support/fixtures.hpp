#pragma once

// Problem and proof texts shared by the bridge tests and the acceptance run.

namespace fixtures {

inline constexpr const char* kGroupFile =
    "NAME group\n"
    "MODE PROOF\n"
    "SORTS\n"
    "  ANY\n"
    "SIGNATURE\n"
    "  e: -> ANY\n"
    "  i: ANY -> ANY\n"
    "  f: ANY ANY -> ANY\n"
    "  a: -> ANY\n"
    "ORDERING\n"
    "LPO\n"
    "  i > f > e > a\n"
    "VARIABLES\n"
    "  x,y,z : ANY\n"
    "EQUATIONS\n"
    "  f(x,e) = x\n"
    "  f(x,i(x)) = e\n"
    "  f(f(x,y),z) = f(x,f(y,z))\n"
    "CONCLUSION\n"
    "  f(a,i(a)) = f(i(a),a)\n";

inline constexpr const char* kGroupOutput = R"(
  Lemma 1: f(e,i(i(x1))) = x1

    f(e,i(i(x1)))
 =    by Axiom 2 RL at 1 with {x1 <- x1}
    f(f(x1,i(x1)),i(i(x1)))
 =    by Axiom 3 LR at e with {x3 <- i(i(x1)), x2 <- i(x1), x1 <- x1}
    f(x1,f(i(x1),i(i(x1))))
 =    by Axiom 2 LR at 2 with {x1 <- i(x1)}
    f(x1,e)
 =    by Axiom 1 LR at e with {x1 <- x1}
    x1

  Lemma 2: ...

  Lemma 3: ...

  Lemma 4: ...

  Theorem 1: f(a,i(a)) = f(i(a),a)

    f(a,i(a))
 =    by Axiom 2 LR at e with {x1 <- a}
    e
 =    by Axiom 2 RL at e with {x1 <- i(a)}
    f(i(a),i(i(a)))
 =    by Lemma 4 LR at 2 with {x1 <- a}
    f(i(a),a)
)";

inline constexpr const char* kExampleStatement =
    "(A : *) (f g : A -> A -> A)"
    " -> (axiom1 : (x y z : A) -> Id A (f x (g y (g x z))) x)"
    " -> (axiom2 : (x y z : A) -> Id A (g x (f y (f x z))) x)"
    " -> (x y : A) -> Id A (f x (g y x)) x";

inline constexpr const char* kExampleTrace = R"(
  Theorem 1: s5(s1,s4(s0,s1)) = s1

    s5(s1,s4(s0,s1))
 =    by Axiom 2 RL at 2.2 with {x3 <- y, x2 <- z, x1 <- s1}
    s5(s1,s4(s0,s4(s1,s5(z,s5(s1,y)))))
 =    by Axiom 1 LR at e with {x3 <- s5(z,s5(s1,y)), x2 <- s0, x1 <- s1}
    s1
)";

inline constexpr const char* kExampleTerm =
    "trans A (f x (g y x)) (f x (g y (g x (f y (f x y))))) x "
    "(cong A A x (g x (f y (f x y))) (\\rc-cong-var -> f x (g y rc-cong-var)) "
    "(sym A (g x (f y (f x y))) x (ax2 x y y))) (ax1 x y (f y (f x y)))";

inline constexpr const char* kGroupStatement =
    "(A : *) (e : A) (i : A -> A) (f : A -> A -> A) (a : A)"
    " -> (ax1 : (x : A) -> Id A (f x e) x)"
    " -> (ax2 : (x : A) -> Id A (f x (i x)) e)"
    " -> (ax3 : (x y z : A) -> Id A (f (f x y) z) (f x (f y z)))"
    " -> Id A (f a (i a)) (f (i a) a)";

inline constexpr const char* kInventedStatement =
    "(A : *) (f g : A -> A -> A)"
    " -> (ax1 : (x : A) -> Id A (f x x) x)"
    " -> (ax2 : (x : A) -> Id A (g x x) x)"
    " -> (ax3 : (x y : A) -> Id A (f x y) (f y x))"
    " -> (ax4 : (x y : A) -> Id A (g x y) (g y x))"
    " -> (ax5 : (x y z : A) -> Id A (f (f x y) z) (f x (f y z)))"
    " -> (ax6 : (x y z : A) -> Id A (g (g x y) z) (g x (g y z)))"
    " -> (ax7 : (x y z : A) -> Id A (g x (f y (f x z))) x)"
    " -> (ax8 : (x y z : A) -> Id A (f x (g y (g x z))) x)"
    " -> (x y : A) -> Id A (f x (g y x)) x";

inline constexpr const char* kInventedTrace = R"(
  Lemma 1: s10(x1,s14(x2,x1)) = x1

    s10(x1,s14(x2,x1))
 =    by Axiom 7 RL at 2.2 with {x3 <- y, x2 <- z, x1 <- x1}
    s10(x1,s14(x2,s14(x1,s10(z,s10(x1,y)))))
 =    by Axiom 8 LR at e with {x3 <- s10(z,s10(x1,y)), x2 <- x2, x1 <- x1}
    x1

  Theorem 1: s10(s3,s14(s5,s3)) = s3

    s10(s3,s14(s5,s3))
 =    by Lemma 1 LR at e with {x1 <- s3, x2 <- s5}
    s3
)";

}  // namespace fixtures
