//! Fixed outputs of the graded interior Euler operator at `s >= 3`, `l >= 2`,
//! where no closed form is available.

use varbicomplex::filtration::{b_op, filtration_level, gr_top, ibar};
use varbicomplex::frontend::{parse_form, SessionConfig};

struct Golden {
    n: usize,
    m: usize,
    level: u32,
    input: &'static str,
    ibar: &'static str,
    b: &'static str,
}

const GOLDENS: &[Golden] = &[
    Golden {
        n: 1,
        m: 1,
        level: 3,
        input: "theta1 ^ theta1_1 ^ theta1_11 ^ nu",
        ibar: "theta1 ^ theta1_1 ^ theta1_11 ^ nu",
        b: "0",
    },
    Golden {
        n: 1,
        m: 2,
        level: 2,
        input: "theta1 ^ theta2 ^ theta1_11 ^ nu",
        ibar: "2/3 * theta1 ^ theta1_1 ^ theta2_1 ^ nu - 1/3 * theta1 ^ theta1_11 ^ theta2 ^ nu",
        b: "0",
    },
    Golden {
        n: 1,
        m: 2,
        level: 2,
        input: "theta1 ^ theta2_1 ^ theta1_1 ^ nu",
        ibar: "-2/3 * theta1 ^ theta1_1 ^ theta2_1 ^ nu + 1/3 * theta1 ^ theta1_11 ^ theta2 ^ nu",
        b: "0",
    },
    Golden {
        n: 2,
        m: 1,
        level: 2,
        input: "theta1 ^ theta1_1 ^ theta1_2 ^ nu",
        ibar: "-theta1 ^ theta1_2 ^ theta1_1 ^ nu",
        b: "0",
    },
    Golden {
        n: 2,
        m: 1,
        level: 3,
        input: "u1 * theta1 ^ theta1_1 ^ theta1_12 ^ nu",
        ibar: "1/3*u1 * theta1 ^ theta1_2 ^ theta1_11 ^ nu + 2/3*u1 * theta1 ^ theta1_1 ^ theta1_12 ^ nu",
        b: "1/3*u1_1 * theta1 ^ theta1_2 ^ theta1_1 ^ nu",
    },
    Golden {
        n: 2,
        m: 2,
        level: 2,
        input: "theta1 ^ theta2 ^ theta1_1 ^ theta2_2 ^ nu",
        ibar: "-theta1 ^ theta1_1 ^ theta2 ^ theta2_2 ^ nu",
        b: "0",
    },
    Golden {
        n: 1,
        m: 1,
        level: 4,
        input: "x1 * theta1 ^ theta1_1 ^ theta1_111 ^ nu",
        ibar: "0",
        b: "-theta1 ^ theta1_1 ^ theta1_11 ^ nu",
    },
];

#[test]
fn graded_interior_euler_goldens() {
    for g in GOLDENS {
        let cfg = SessionConfig::new(g.n, g.m).unwrap();
        let w = parse_form(g.input, &cfg).unwrap();
        let class = gr_top(&w, g.level).unwrap();
        let fixed = ibar(&class).unwrap();
        assert_eq!(fixed.payload().to_string(), g.ibar, "Ī on {}", g.input);
        assert_eq!(ibar(&fixed).unwrap(), fixed, "idempotency on {}", g.input);
        let b = b_op(&class).unwrap();
        assert_eq!(b.to_string(), g.b, "B on {}", g.input);
        assert!(filtration_level(&b) < i64::from(g.level));
    }
}
