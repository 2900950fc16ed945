//! Decks shipped inside the binary.

pub struct Example {
    pub name: &'static str,
    pub summary: &'static str,
    pub text: &'static str,
}

pub const EXAMPLES: [Example; 7] = [
    Example {
        name: "follower_ac",
        summary: "CCII+ voltage follower, AC sweep 1 Hz to 1 MHz",
        text: include_str!("../decks/follower_ac.cir"),
    },
    Example {
        name: "conveyance_tran",
        summary: "CCII+ current conveyance, Vx = Vy and ix = iz over 5 periods",
        text: include_str!("../decks/conveyance_tran.cir"),
    },
    Example {
        name: "amp_op",
        summary: "CCII+ amplifier operating point, gain R2/R1 = 10",
        text: include_str!("../decks/amp_op.cir"),
    },
    Example {
        name: "amp_tran",
        summary: "CCII+ amplifier transient, 100 mV in and 1 V out",
        text: include_str!("../decks/amp_tran.cir"),
    },
    Example {
        name: "macro_follower",
        summary: "CCII+ built from finite-gain controlled sources",
        text: include_str!("../decks/macro_follower.cir"),
    },
    Example {
        name: "macro_inverting",
        summary: "CCII- macro-model with the Z current inverted",
        text: include_str!("../decks/macro_inverting.cir"),
    },
    Example {
        name: "cccii_rx",
        summary: "CCCII+ amplifier with RX = VT/(2 IB)",
        text: include_str!("../decks/cccii_rx.cir"),
    },
];

pub fn find(name: &str) -> Option<&'static Example> {
    EXAMPLES.iter().find(|e| e.name == name)
}
