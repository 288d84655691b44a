//! The worked examples shipped with the crate, as text.

/// Two-sink binary network with unit coefficients, in its own edge order.
pub const TWO_SINK_NET: &str = include_str!("../fixtures/two_sink.net");
/// Its coefficient matrix `K`.
pub const TWO_SINK_K: &str = include_str!("../fixtures/two_sink_k.txt");
/// Its transfer matrix `F`.
pub const TWO_SINK_F: &str = include_str!("../fixtures/two_sink_f.txt");
/// A Z4 network whose single sink sees a 7 × 6 map with kernel `⟨0111333⟩`.
pub const Z4_ONE_SINK_NET: &str = include_str!("../fixtures/z4_one_sink.net");
/// The 7 × 6 map onto the support of the two-coset Z4 code.
pub const Z4_MAP: &str = include_str!("../fixtures/z4_map.txt");
/// The two messages of the Z4 code, one per line.
pub const Z4_MESSAGES: &str = include_str!("../fixtures/z4_messages.txt");
/// The two-coset Z4 code with `d = 8`.
pub const Z4_TWO_COSETS: &str = include_str!("../fixtures/z4_two_cosets.code");

/// File names and contents, for writing the set to disk.
pub const ALL: [(&str, &str); 7] = [
    ("two_sink.net", TWO_SINK_NET),
    ("two_sink_k.txt", TWO_SINK_K),
    ("two_sink_f.txt", TWO_SINK_F),
    ("z4_one_sink.net", Z4_ONE_SINK_NET),
    ("z4_map.txt", Z4_MAP),
    ("z4_messages.txt", Z4_MESSAGES),
    ("z4_two_cosets.code", Z4_TWO_COSETS),
];

/// The directory these files were read from at build time.
pub const DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
