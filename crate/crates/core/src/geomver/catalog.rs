//! Every explicit map and identity checked by the randomized verifier.

use super::{Expect, Link, MapEntry};

fn fam19(x: &str, y: &str, s: &str, t: &str) -> String {
    format!("({y})^2 - (({x})^3 + 1/4*(({s})^2-1)^2*({x})^2 + ({s})^2*(({s})^2-1)^3/(64*({t}))*({x}))")
}

fn weier1(x: &str, y: &str) -> String {
    format!("({y})^2 - ({x})*(({x})^2 + 2*(32*s^4-64*s^3+32*s^2-t)*({x}) + t^2)")
}

fn inose(x: &str, y: &str, u: &str) -> String {
    format!(
        "({y})^2 - (({x})^3 - 16/3*t^3*(16*t+9)*({x}) + 512*t^5*({u}) + 8*t^4/({u}) + 8/27*(1024*t^2-2592*t)*t^4)"
    )
}

fn si_form(x: &str, y: &str, u: &str, t: &str) -> String {
    format!(
        "({y})^2 - (512/27*({t})*({u})^5*(32*({t})*({u})*(32*({t})+54*({u})-81)+27) - 256/3*({t})*(16*({t})+9)*({u})^4*({x}) + ({x})^3)"
    )
}

fn f3(v: &str) -> String {
    format!("(({v})^3 - 2*({v})^2 + (1-S)/2*({v}))")
}

fn g3(v: &str) -> String {
    format!("(({v})^3 + 4*({v})^2 + 2*(1+S)*({v}))")
}

const CANONICAL: &str = "x*y*z*(1-x-y-z) - 1/(256*t)";
const THREE_STAR: &str = "(s+1)^2/(256*t) + (s-1)*x^2*z*(s*(2*x+z-1)+z-1)";
const QUARTIC: &str = "s^4*(u/t+64*u^3+16*u^2) + s^3*(192*u^3-3*u/t) + s^2*(3*u/t+192*u^3-32*u^2) + s*(64*u^3-u/t) + 16*u^2 - W^2";
const SI_QUARTIC: &str = "s^4*(64*t*u^3+16*t*u^2+u) + s^3*(192*t*u^3-3*u) + s^2*(192*t*u^3-32*t*u^2+3*u) + s*(64*t*u^3-u) + 16*t*u^2 - W^2";
const T_OF_S: &str = "1/(1-S^2)";

fn x8() -> String {
    "y^2 + 1/(8*t^3)*(t*u^2+(1-t)*v^2)*(-2*(t-1)*t*((u+4)*u+6)*v^2 - 8*(t-1)*t*(u+2)*v + t*(t*(u+4)*u*(u+2)^2+4) + (t-1)^2*v^4)".into()
}

fn x7() -> String {
    format!("y^2 - {}*{}", f3("x1"), g3("x2"))
}

fn x6() -> String {
    let g = g3("x2");
    format!("Y^2 - (X^3 - 2*{g}*X^2 + (1-S)/2*{g}^2*X)")
}

fn x5() -> String {
    format!("{} - u^2*{}", f3("x1"), g3("x2"))
}

fn x4() -> String {
    "Y^2 + X^3 + X*(16/3*(-25+9*S^2)*u^4) - 8*(S-1)^2*(1+S)*u^4 + 256/27*(49-81*S^2)*u^6 + 512*(S-1)*(1+S)^2*u^8".into()
}

fn x3() -> String {
    "Y^2 - (X^3 + 16/3*(-25+9*S^2)*u^4*X + 8*(S-1)^2*(1+S)*u^4 + 256/27*(-49+81*S^2)*u^6 - 512*(S-1)*(1+S)^2*u^8)".into()
}

fn x2() -> String {
    "Y^2 - (X^3 - 16/3*t^3*(9+16*t)*X + 8*t^4*(32*u^2*((S+1)*t*(32*t+108*u^2-81)-54*u^2)+27)/(27*(S+1)*u^2))".into()
}

const PSI5_A: &str = "2*u^2*(x1*(3*(S-1)*(x2+4)+16*x1) - 12*(S+1)*u^2*(2*S+x2*(x2+4)+2))/(3*x1^2)";
const PSI5_B: &str = "-(2*u^2*(16*(S+1)^2*u^4*(2*S+x2*(x2+4)+2) - 4*u^2*x1*(x2*(S*(S+4*x1+8)+4*x1-9) + 4*(S+1)*(2*S-(x1-4)*x1-2) + 2*(S-1)*x2^2) + (S-1)*x1^2*(S+2*x1-1)))/x1^3";

fn psi_links() -> Vec<Link> {
    let g = g3("x2");
    vec![
        Link::new("psi8").stage(&[("x1", "-(u-S*v)/2"), ("x2", "u+S*v")]).target(&x7()),
        Link::new("psi7").stage(&[("X", &format!("x1*{g}")), ("Y", &format!("y*{g}"))]).target(&x6()),
        Link::new("psi6").stage(&[("x1", &format!("X/{g}")), ("u", &format!("Y/{g}^2"))]).target(&x5()),
        Link::new("psi5").stage(&[("X", PSI5_A), ("Y", PSI5_B)]).target(&x4()),
        Link::new("psi4").stage(&[("X", "-X")]).target(&x3()),
        Link::new("psi3").stage(&[("X", "t^2*X/u^2"), ("Y", "t^3*Y/u^3")]).target(&x2()),
        Link::new("psi2").stage(&[("u", "u^2*(1+S)")]).target(&inose("X", "Y", "u")),
    ]
}

fn psi_sources() -> Vec<Link> {
    let with_t = |l: Link| l.sample("S").define("t", T_OF_S);
    vec![
        with_t(Link::new("psi8")).sample("u v").solve("y", &x8()),
        with_t(Link::new("psi7")).sample("x1 x2").solve("y", &x7()),
        with_t(Link::new("psi6")).sample("x2 X").solve("Y", &x6()),
        with_t(Link::new("psi5")).sample("x1 x2").solve("u", &x5()),
        with_t(Link::new("psi4")).sample("u X").solve("Y", &x4()),
        with_t(Link::new("psi3")).sample("u X").solve("Y", &x3()),
        with_t(Link::new("psi2")).sample("u X").solve("Y", &x2()),
    ]
}

fn single(name: &str, anchor: &'static str, expect: Expect, link: Link) -> MapEntry {
    MapEntry { name: name.into(), anchor, expect, links: vec![link] }
}

fn jw(a2: &str, a4: &str) -> String {
    format!("(16*({a2})^2 - 48*({a4}))^3/(16*({a4})^2*(({a2})^2 - 4*({a4})))")
}

fn ju(u: &str) -> String {
    format!("(({u})+256)^3/({u})^2")
}

/// The ψ-chain entries, one per link, followed by the full composition.
pub fn psi_chain() -> Vec<MapEntry> {
    let mut out = Vec::new();
    for (src, link) in psi_sources().into_iter().zip(psi_links()) {
        let name = src.name.clone();
        let mut l = src;
        l.stages = link.stages;
        l.targets = link.targets;
        out.push(single(&name, "psi chain link", Expect::Holds, l));
    }
    let mut links = psi_links();
    let src = psi_sources().remove(0);
    links[0].steps = src.steps;
    out.push(MapEntry { name: "psi_chain".into(), anchor: "psi chain composition", expect: Expect::Holds, links });
    out
}

pub fn catalog() -> Vec<MapEntry> {
    use Expect::*;
    let mut out = vec![
        single("identity", "sanity", Holds, Link::new("identity").sample("t x").solve("y", "x*y - t").target("x*y - t")),
        single(
            "vt_three_star",
            "canonical model to three-star model",
            Holds,
            Link::new("vt_three_star")
                .sample("t x z")
                .solve("y", CANONICAL)
                .stage(&[("s", "(x+y)/(x-y)")])
                .target(THREE_STAR),
        ),
        single(
            "three_star_family19",
            "three-star model to Weierstrass form",
            Holds,
            Link::new("three_star_family19")
                .sample("t s x")
                .solve("z", THREE_STAR)
                .stage(&[
                    ("X", "2*(s-1)^2*s*x*(2*s*x+s*z-s+z-1)"),
                    ("Y", "(s-1)^3*s*x*(4*s*x-s-1)*(2*s*x+s*z-s+z-1)"),
                ])
                .target(&fam19("X", "Y", "s", "t")),
        ),
        single(
            "family19alt_family19",
            "automorphism substitution",
            Holds,
            Link::new("family19alt_family19")
                .sample("t s X")
                .solve("Y", "Y^2 - (X^3 + 4*s^2*X^2 - s^3*(s-1)^2/t*X)")
                .stage(&[("s", "(s-1)/(s+1)"), ("X", "X/(s+1)^4"), ("Y", "Y/(s+1)^6")])
                .target(&fam19("X", "Y", "s", "t")),
        ),
    ];
    let can1 = |constant: &str| {
        Link::new("can1")
            .sample("t s x")
            .solve("z", &format!("x*(s-x)*z*(1-s-z) - {constant}"))
            .stage(&[("X", "t - s*t/x"), ("Y", "8*s*t*(s-x)*(s+2*z-1)/x")])
            .target(&weier1("X", "Y"))
    };
    out.push(single("can1_weier1", "change of coordinates to Weier1", Holds, can1("t/256")));
    out.push(single("can1_weier1_printed", "change of coordinates to Weier1, as printed", Fails, can1("1/(256*t)")));
    out.push(single(
        "can1_x",
        "fibration over x with fiber IV* at 0",
        Holds,
        Link::new("can1_x")
            .sample("t s x")
            .solve("z", "x*(s-x)*z*(1-s-z) - 1/(256*t)")
            .define("m", "1-x")
            .define("k", "1/(256*t*x)")
            .define("a", "s-x")
            .stage(&[("X", "-4*k/a"), ("Y", "4*k*(2*a*z - a*(m-a))/a^2")])
            .target("Y^2 - (X^3 + m^2*X^2 + 8*k*m*X + 16*k^2)"),
    ));
    let quartic = |name: &str| Link::new(name).sample("t s u").solve("W", QUARTIC);
    out.push(single(
        "quartic_family19",
        "Kummer quartic to Weierstrass form",
        Holds,
        quartic("quartic_family19")
            .stage(&[("X", "u*(s+1)^3*s"), ("Y", "W*s*(1+s)^3/8")])
            .target(&fam19("X", "Y", "s", "t")),
    ));
    let inose_map = |w: &str| {
        [
            ("X", format!("t*(s*(192*(s+1)*t*u^2-32*s*t*u+3*s-3)+96*t*u-24*({w}))/(12*s^2*u)")),
            (
                "Y",
                format!(
                    "t*(4*t*u*(64*(s^2-1)*t*u-192*s*(s+1)^2*t*u^2+3*s*(s-1)^2)+({w})*(s*(64*t*u^2-1)+64*t*u))/(8*s^3*u^2)"
                ),
            ),
        ]
    };
    let m = inose_map("t*W");
    out.push(single(
        "quartic_inose",
        "Inose transform",
        Holds,
        quartic("quartic_inose")
            .stage(&[("X", &m[0].1), ("Y", &m[1].1)])
            .target(&inose("X", "Y", "u")),
    ));
    let m = inose_map("W");
    out.push(single(
        "quartic_inose_printed",
        "Inose transform, as printed",
        Fails,
        quartic("quartic_inose_printed")
            .stage(&[("X", &m[0].1), ("Y", &m[1].1)])
            .target(&inose("X", "Y", "u")),
    ));
    let si_quartic = |name: &str| Link::new(name).sample("w s u").define("t", "w^2").solve("W", SI_QUARTIC);
    out.push(single(
        "si_quartic_family19",
        "alternative quartic to Weierstrass form",
        Holds,
        si_quartic("si_quartic_family19")
            .stage(&[("X", "u*(s+1)^3*s"), ("Y", "W*s*(1+s)^3/(8*w)")])
            .target(&fam19("X", "Y", "s", "t")),
    ));
    out.push(single(
        "si_quartic_si_form",
        "alternative quartic to Shioda-Inose form",
        Holds,
        si_quartic("si_quartic_si_form")
            .stage(&[
                ("X", "u*(s*(192*(s+1)*w^2*u^2-32*s*w^2*u+3*s-3)+96*w^2*u-24*w*W)/(3*s^2)"),
                ("Y", "u*(4*w*u*(-64*(s^2-1)*w^2*u+192*s*(s+1)^2*w^2*u^2-3*s*(s-1)^2)+W*(-64*s*w^2*u^2+s-64*w^2*u))/s^3"),
            ])
            .target(&si_form("X", "Y", "u", "t")),
    ));
    out.push(single(
        "si_params_si_form",
        "Shioda-Inose form in the parameters A, B",
        Holds,
        Link::new("si_params_si_form")
            .sample("v u X")
            .define("t", "v^4")
            .define("A", "(16*t+9)/9")
            .define("B", "2/27*v^2*(81-32*t)")
            .solve("Y", "Y^2 - (X^3 - 3*A*u^4*X + u^5*(u^2-2*B*u+1))")
            .define("r", "-1/(2*v)")
            .stage(&[("X", "X*r^2"), ("Y", "Y*r^3"), ("u", "u/(8*v^2)")])
            .target(&si_form("X", "Y", "u", "t")),
    ));
    out.extend(psi_chain());
    let qt = |name: &str, t: Option<&str>| {
        let l = Link::new(name);
        let l = match t {
            Some(t) => l.define("t", t).sample("u"),
            None => l.sample("t u"),
        };
        l.define("X", "(128*t*u*(u*(32*t*(3*(u-2)*u+1)-3)-3)+3)/(768*u^2)")
            .define("Y", "(1-64*t*u^2)*(64*t*u*(2*u*(32*t*(u-2)*(u-1)-1)-3)+1)/(4096*u^3)")
            .target(&inose("X", "Y", "u"))
    };
    out.push(single("qt_on_curve", "section Q_t on the Inose model", Holds, qt("qt_on_curve", None)));
    out.push(single("qt_on_curve_t1", "section Q_1 on the Inose model", Holds, qt("qt_on_curve_t1", Some("1"))));
    let h_params = |l: Link| {
        l.define("a", "8*(3*h^6-8)/(3*h^14*(h^6-2)^2)")
            .define("b", "64*(9*h^6-16)/(27*h^21*(h^6-2)^3)")
            .define("c", "-2*(3*h^6+2)/(3*h^10*(h^6-2)^2)")
            .define("d", "8*(9*h^6-2)/(27*h^15*(h^6-2)^3)")
            .define("t", "-1/(h^6*(h^6-2))")
    };
    out.push(single(
        "si_system_h",
        "five-variable system in the parameter h",
        Holds,
        h_params(Link::new("si_system_h").sample("h"))
            .target("9*a*c - 256*t^4 - 144*t^3")
            .target("-729*b*d + 16384*t^6 - 41472*t^5")
            .target("-4*c^3 - 27*d^2 - 32*t^4")
            .target("-4*a^3 - 27*b^2 - 2048*t^5"),
    ));
    out.push(single(
        "si_g_vs_h",
        "g-parametrization against h",
        Holds,
        h_params(Link::new("si_g_vs_h").sample("h"))
            .define("g", "h^2")
            .target("8*(3*g^3-8)/(3*g^7*(g^3-2)^2) - a")
            .target("-1/(g^3*(g^3-2)) - t")
            .target("-2*(3*g^3+2)/(3*g^5*(g^3-2)^2) - c")
            .target("64*(2-9*g^3)^2/(729*g^15*(g^3-2)^6) - d^2")
            .target("512*(81*(g^3-2)*g^3+32)/(729*d*g^18*(g^3-2)^6) - b"),
    ));
    out.push(single(
        "si_elimination",
        "relation between a and t",
        Holds,
        h_params(Link::new("si_elimination").sample("h"))
            .target("27*a^3*(27*a^3 + 1024*(512*t^2-414*t+27)*t^5) + 262144*(16*t+9)^3*t^10"),
    ));
    out.push(single(
        "si_f_vs_g",
        "f-parametrization against g",
        Holds,
        Link::new("si_f_vs_g")
            .sample("g")
            .define("f", "2^26*g")
            .target("2^263*(3*f^3-2^81)/(3*f^7*(f^3-2^79)^2) - 8*(3*g^3-8)/(3*g^7*(g^3-2)^2)")
            .target("-2^156/(f^3*(f^3-2^79)) + 1/(g^3*(g^3-2))"),
    ));
    out.push(single(
        "si_ab_j_system",
        "A, B against the j-invariant pair",
        Holds,
        Link::new("si_ab_j_system")
            .sample("w")
            .define("t", "w^2")
            .solve("r", "r^2 - t*(t-1)")
            .define("J1", "64*(512*t^2-414*t+2*r*(256*t-81)+27)")
            .define("J2", "64*(512*t^2-414*t-2*r*(256*t-81)+27)")
            .define("A", "(16*t+9)/9")
            .define("B", "2/27*w*(81-32*t)")
            .target("A^3 - J1*J2/12^6")
            .target("B^2 - (1-J1/1728)*(1-J2/1728)"),
    ));
    let e1 = |s: &str| jw("-2", &format!("(1-({s}))/2"));
    let e2 = |s: &str| jw("4", &format!("2*(1+({s}))"));
    out.push(single(
        "x0_2_e2",
        "forgetful map, j(-64(1+s)/(s-1))",
        Holds,
        Link::new("x0_2_e2").sample("s").target(&format!("{} - {}", ju("-64*(1+s)/(s-1)"), e2("s"))),
    ));
    out.push(single(
        "x0_2_e1",
        "forgetful map, j(-64(s-1)/(s+1))",
        Holds,
        Link::new("x0_2_e1").sample("s").target(&format!("{} - {}", ju("-64*(s-1)/(s+1)"), e1("s"))),
    ));
    out.push(single(
        "x0_2_e1_printed",
        "forgetful map, first identity as printed",
        Fails,
        Link::new("x0_2_e1_printed").sample("s").target(&format!("{} - {}", ju("-64*(1+s)/(s-1)"), e1("s"))),
    ));
    out.push(single(
        "x0_2_e2_printed",
        "forgetful map, second identity as printed",
        Fails,
        Link::new("x0_2_e2_printed").sample("s").target(&format!("{} - {}", ju("-64*(s-1)/(s+1)"), e2("s"))),
    ));
    let ab = |name: &str| {
        Link::new(name)
            .sample("a b")
            .define("s", "(8*b-a^2)/a^2")
            .define("t", "a^4/(16*(a^2-4*b)*b)")
    };
    out.push(single("x0_2_s_t", "s against t", Holds, ab("x0_2_s_t").target("s^2 - (t-1)/t")));
    out.push(single(
        "x0_2_ab_j",
        "E_{a,b} and its 2-isogenous curve",
        Holds,
        ab("x0_2_ab_j")
            .target(&format!("{} - {}", e2("s"), jw("a", "b")))
            .target(&format!("{} - {}", e1("s"), jw("-2*a", "a^2-4*b")))
            .target(&format!("{} - {}", ju("256*b/(a^2-4*b)"), jw("a", "b"))),
    ));
    out
}

pub fn find(name: &str) -> Option<MapEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::geomver::verify_map;
    use std::collections::BTreeSet;

    #[test]
    fn names_unique() {
        let c = catalog();
        let names: BTreeSet<_> = c.iter().map(|e| e.name.clone()).collect();
        assert_eq!(names.len(), c.len());
    }

    #[test]
    fn every_entry_meets_expectation() {
        for e in catalog() {
            let r = verify_map(&e, 8, 62, 7, Exec::Parallel).unwrap();
            assert!(r.ok(), "{}: {:?}", e.name, r.first_failure);
        }
    }
}
