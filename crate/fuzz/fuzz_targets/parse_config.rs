#![no_main]

use cstar_fixed::cli::{parse_config, parse_config_for, Command};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = parse_config(text);
    for command in Command::ALL {
        let _ = parse_config_for(command, text);
    }
});
