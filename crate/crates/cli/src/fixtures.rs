//! Manifests bundled with the binary, addressed as `builtin:NAME`.

pub const BUILTIN: &[(&str, &str)] = &[
    ("example_2_1", include_str!("../fixtures/example_2_1.toml")),
    ("example_3_1", include_str!("../fixtures/example_3_1.toml")),
    ("example_3_2", include_str!("../fixtures/example_3_2.toml")),
];

pub fn builtin(name: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}
