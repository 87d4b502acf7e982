use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use qmuse::config::ConfigFile;
use qmuse::hyperdie::{self, assemble_code, canonical_rules, CodeRule, ParameterBank};
use qmuse::markov::{self, TransitionMatrix};
use qmuse::net::{self, RemoteBackend};
use qmuse::qsim::{derive_seed, Backend, Gate, LocalBackend, SimRng, StateVector};
use qmuse::qwalk::{self, CubeCode, WalkConfig};
use qmuse::score::{self, Sequence};
use qmuse::voice::{self, RenderSettings};

#[derive(Parser)]
#[command(
    name = "qmuse",
    version,
    about = "Quantum-dice music toolkit",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Roll the 9-qubit hyper-die once and print the decoded patch values.
    Die(DieArgs),
    /// Roll the hyper-die per sound and render the patches to WAV.
    Voice(VoiceArgs),
    /// Generate a MIDI sequence with the cube quantum walk.
    Walk(WalkArgs),
    /// Generate notes with a Markov chain, to MIDI or interactively.
    Markov(MarkovArgs),
    /// Run the simulator as a TCP backend server.
    Serve(ServeArgs),
    /// Print the CX and Toffoli truth tables as a simulator self-check.
    Gates,
}

#[derive(Args)]
struct CommonArgs {
    /// Execution backend: `local`, `remote` (QMUSE_ENDPOINT or
    /// localhost:7117) or `remote:HOST:PORT`.
    #[arg(long, global = true, default_value = "local")]
    backend: String,
    /// JSON config file (parameter bank, code rules, dictionaries, matrix,
    /// patch overrides).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

impl CommonArgs {
    fn backend(&self) -> Result<Arc<dyn Backend>> {
        match self.backend.as_str() {
            "local" => Ok(Arc::new(LocalBackend)),
            "remote" => Ok(Arc::new(RemoteBackend::from_env_or(None))),
            other => match other.strip_prefix("remote:") {
                Some(endpoint) if !endpoint.is_empty() => {
                    Ok(Arc::new(RemoteBackend::new(endpoint)))
                }
                _ => bail!("unknown backend {other:?}; use local, remote or remote:HOST:PORT"),
            },
        }
    }

    fn config(&self) -> Result<ConfigFile> {
        match &self.config {
            Some(path) => ConfigFile::load(path)
                .with_context(|| format!("cannot load config {}", path.display())),
            None => Ok(ConfigFile::default()),
        }
    }
}

#[derive(Args)]
struct DieArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Seed for the roll.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VoiceArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// How many sounds to synthesize (one die roll each).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    sounds: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output WAV path; multiple sounds get numbered suffixes.
    #[arg(long, default_value = "voice.wav")]
    out: PathBuf,
    /// Concatenate all sounds into one file instead.
    #[arg(long)]
    concat: bool,
    #[arg(long, default_value_t = 44_100)]
    sample_rate: u32,
}

fn parse_cube_code(s: &str) -> Result<CubeCode, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("{s:?} is not a positive number")),
    }
}

#[derive(Args)]
struct WalkArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u32).range(1..))]
    steps: u32,
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    shots: u64,
    /// Initial pitch code (three bits, q0 first).
    #[arg(long, default_value = "000", value_parser = parse_cube_code)]
    pitch: CubeCode,
    /// Initial duration code (three bits, q0 first).
    #[arg(long, default_value = "000", value_parser = parse_cube_code)]
    duration: CubeCode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "walk.mid")]
    out: PathBuf,
    #[arg(long, default_value_t = 120.0, value_parser = parse_positive)]
    tempo: f64,
    #[arg(long, default_value_t = 480)]
    tpq: u16,
}

#[derive(Args)]
struct MarkovArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Built-in matrix (a config matrix wins).
    #[arg(long, default_value = "rules", value_parser = ["rules", "random-walk"])]
    matrix: String,
    #[arg(long, default_value = "C4")]
    start: String,
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    length: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "markov.mid")]
    out: PathBuf,
    /// Respond to note labels read line by line from stdin instead.
    #[arg(long)]
    interactive: bool,
    /// Duration of each generated note in quarter-note units.
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
    note_quarters: f64,
    #[arg(long, default_value_t = 120.0, value_parser = parse_positive)]
    tempo: f64,
    #[arg(long, default_value_t = 480)]
    tpq: u16,
}

#[derive(Args)]
struct ServeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Address to listen on; port 0 picks a free port.
    #[arg(long, default_value = "127.0.0.1:7117")]
    endpoint: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Die(args) => run_die(args),
        Command::Voice(args) => run_voice(args),
        Command::Walk(args) => run_walk(args),
        Command::Markov(args) => run_markov(args),
        Command::Serve(args) => run_serve(args),
        Command::Gates => run_gates(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn die_setup(config: &ConfigFile) -> (ParameterBank, Vec<CodeRule>) {
    let bank = config.parameter_bank.clone().unwrap_or_default();
    let rules = config.code_rules.clone().unwrap_or_else(canonical_rules);
    (bank, rules)
}

fn unit_for(parameter: &str) -> &'static str {
    if parameter.starts_with("amp") {
        "dB"
    } else if parameter == "dur" {
        "s"
    } else {
        "Hz"
    }
}

fn run_die(args: DieArgs) -> Result<()> {
    let backend = args.common.backend()?;
    let (bank, rules) = die_setup(&args.common.config()?);
    let meas = hyperdie::roll_die(backend.as_ref(), args.seed)?;

    let bits: Vec<String> = meas.bits().iter().map(u8::to_string).collect();
    println!("measurement [C8..C0]: [{}]", bits.join(", "));
    for rule in &rules {
        let index = assemble_code(&meas, rule.triple)?;
        let value = bank
            .family(&rule.parameter)
            .map(|family| family[index])
            .context("rule validated by retrieve_patch")?;
        let code: String = rule.triple.iter().map(|&i| meas.c(i).to_string()).collect();
        println!(
            "{:<6} (C{} C{} C{} = {} -> {}) = {} {}",
            rule.parameter,
            rule.triple[0],
            rule.triple[1],
            rule.triple[2],
            code,
            index,
            value,
            unit_for(&rule.parameter),
        );
    }
    // Fail loudly if the rule set cannot produce a playable patch.
    hyperdie::retrieve_patch(&meas, &bank, &rules)?;
    Ok(())
}

fn numbered_path(base: &Path, index: u32, total: u32) -> PathBuf {
    if total == 1 {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("sound");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("wav");
    base.with_file_name(format!("{stem}-{:02}.{ext}", index + 1))
}

fn run_voice(args: VoiceArgs) -> Result<()> {
    let backend = args.common.backend()?;
    let config = args.common.config()?;
    let (bank, rules) = die_setup(&config);
    let settings = RenderSettings::with_sample_rate(args.sample_rate);

    let mut concatenated: Vec<f32> = Vec::new();
    for sound in 0..args.sounds {
        let seed = derive_seed(args.seed, u64::from(sound));
        let meas = hyperdie::roll_die(backend.as_ref(), seed)?;
        let mut patch = hyperdie::retrieve_patch(&meas, &bank, &rules)?;
        if let Some(overrides) = &config.patch {
            overrides.apply_to(&mut patch);
        }
        let buffer = voice::render_voice(&patch, &settings)?;
        println!(
            "sound {}: fnd {} -> {} Hz, fq1 {} Hz, dur {} s ({} samples)",
            sound + 1,
            patch.fnd_start,
            patch.fnd_end,
            patch.formants[0].fq_start,
            patch.dur,
            buffer.samples.len(),
        );
        if args.concat {
            concatenated.extend_from_slice(&buffer.samples);
        } else {
            let path = numbered_path(&args.out, sound, args.sounds);
            voice::write_wav(&buffer, &path)
                .with_context(|| format!("cannot write {}", path.display()))?;
            println!("wrote {}", path.display());
        }
    }
    if args.concat {
        let buffer = voice::AudioBuffer {
            samples: concatenated,
            sample_rate: args.sample_rate,
        };
        voice::write_wav(&buffer, &args.out)
            .with_context(|| format!("cannot write {}", args.out.display()))?;
        println!("wrote {}", args.out.display());
    }
    Ok(())
}

fn run_walk(args: WalkArgs) -> Result<()> {
    let backend = args.common.backend()?;
    let config = args.common.config()?;

    let mut walk = WalkConfig::new(
        args.steps as usize,
        args.shots,
        args.pitch,
        args.duration,
        args.seed,
    );
    if let Some(dict) = config.pitch_dictionary {
        walk.pitch_dictionary = dict;
    }
    if let Some(dict) = config.duration_dictionary {
        walk.duration_dictionary = dict;
    }
    walk.dictionary_schedule = config.dictionary_schedule;

    let codes = qwalk::walk_codes(&walk, backend.as_ref())?;
    for (step, (p, d)) in codes.iter().enumerate() {
        println!("step {:>2}: pitch {} duration {}", step + 1, p, d);
    }
    let mut sequence = qwalk::generate_sequence(&walk, backend.as_ref())?;
    sequence.tempo_bpm = args.tempo;
    score::write_midi(&sequence, &args.out, args.tpq)
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    println!(
        "wrote {} ({} events)",
        args.out.display(),
        sequence.events.len()
    );
    Ok(())
}

fn run_markov(args: MarkovArgs) -> Result<()> {
    let config = args.common.config()?;
    let matrix = match config.matrix {
        Some(matrix) => matrix,
        None if args.matrix == "random-walk" => TransitionMatrix::random_walk(),
        None => TransitionMatrix::sequencing_rules(),
    };
    let mut rng: SimRng = rand_seed(args.seed);

    if args.interactive {
        return interactive_loop(&matrix, &mut rng);
    }

    let labels = markov::generate(&matrix, &args.start, args.length as usize, &mut rng)?;
    println!("{}", labels.join(" "));
    let events = labels
        .iter()
        .map(|label| {
            markov::label_to_midi(label).map(|p| score::NoteEvent::note(p, args.note_quarters))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut sequence = Sequence::new(events);
    sequence.tempo_bpm = args.tempo;
    score::write_midi(&sequence, &args.out, args.tpq)
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    println!(
        "wrote {} ({} notes)",
        args.out.display(),
        sequence.events.len()
    );
    Ok(())
}

fn rand_seed(seed: u64) -> SimRng {
    use qmuse::qsim::shot_rng;
    // Stream 0 of the seed; the CLI's only sequential RNG consumer.
    shot_rng(seed, 0)
}

fn interactive_loop(matrix: &TransitionMatrix, rng: &mut SimRng) -> Result<()> {
    let stdin = std::io::stdin();
    let mut stdout = std::io::stdout();
    for line in stdin.lock().lines() {
        let line = line?;
        let label = line.trim();
        if label.is_empty() {
            continue;
        }
        match markov::next_note(matrix, label, rng) {
            Ok(response) => {
                writeln!(stdout, "{response}")?;
                stdout.flush()?;
            }
            Err(e) => eprintln!("error: {e}"),
        }
    }
    Ok(())
}

fn run_serve(args: ServeArgs) -> Result<()> {
    let backend = args.common.backend()?;
    let server = net::Server::bind(&args.endpoint, backend)?;
    // Announce the bound address (meaningful with port 0) before blocking.
    eprintln!("listening on {}", server.local_addr()?);
    server.run()?;
    unreachable!("server loop never returns normally")
}

fn run_gates() -> Result<()> {
    println!("CX gate table (control q1, target q0)");
    print_truth_table(2, Gate::cx(1, 0))?;
    println!();
    println!("Toffoli gate table (controls q2 q1, target q0)");
    print_truth_table(3, Gate::ccx(2, 1, 0))?;
    Ok(())
}

/// Apply `gate` to every basis state of an n-qubit register and print the
/// resulting basis state, simulating rather than hard-coding the tables.
fn print_truth_table(num_qubits: usize, gate: Gate) -> Result<()> {
    for input in 0..1usize << num_qubits {
        let code: String = (0..num_qubits)
            .rev()
            .map(|q| if input >> q & 1 == 1 { '1' } else { '0' })
            .collect();
        let mut state = StateVector::prepare_basis(num_qubits, &code)?;
        state.apply_gate(&gate)?;
        let output = state
            .probabilities()
            .iter()
            .position(|&p| p > 0.5)
            .context("gate left the computational basis")?;
        let out_code: String = (0..num_qubits)
            .rev()
            .map(|q| if output >> q & 1 == 1 { '1' } else { '0' })
            .collect();
        println!("|{code}> -> |{out_code}>");
    }
    Ok(())
}
