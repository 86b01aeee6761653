"""
コマンドライン

    fino-callnet --config experiment.toml run
    fino-callnet --config experiment.toml --set model.n_trees=100 train --model forest
    fino-callnet --config experiment.toml propagate --method pr --seeds ge3 --alpha 0.9

各サブコマンドのフラグは設定のキーに対応し、--set・環境変数・設定ファイルより優先する
終了コード: 0 成功, 1 使い方・設定の誤り, 2 データの誤り, 3 反復計算の非収束
"""

import json
import logging
import sys
from collections.abc import Mapping, Sequence
from dataclasses import asdict, dataclass, is_dataclass
from datetime import datetime
from typing import Any

import click
from dynaconf.utils.parse_conf import parse_conf_data
from pydantic import ValidationError

from fino_callnet.domain.error import CallnetError, ConvergenceError, DataError, StageError
from fino_callnet.interface.config.experiment import ExperimentConfig, load_experiment_config
from fino_callnet.public.credit_scoring import CreditScoringPipeline

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_CONVERGENCE = 3

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

DATE = click.DateTime(formats=["%Y-%m-%d"])


def _assign(tree: dict[str, Any], key: str, value: Any) -> None:
    *parents, leaf = [part.strip().lower() for part in key.split(".")]
    node = tree
    for part in parents:
        node = node.setdefault(part, {})
    node[leaf] = value


def parse_overrides(pairs: Sequence[str]) -> dict[str, Any]:
    """
    "model.n_trees=100" のような指定を入れ子の dict にする
    値は dynaconf と同じ規則で型を付ける（数値、真偽値、TOML のリスト）
    """
    overrides: dict[str, Any] = {}
    for pair in pairs:
        key, sep, raw = pair.partition("=")
        if not sep or not key.strip():
            raise click.BadParameter(f"expected KEY=VALUE, got '{pair}'", param_hint="--set")
        _assign(overrides, key, parse_conf_data(raw, tomlfy=True))
    return overrides


def flag_overrides(flags: Mapping[str, Any]) -> dict[str, Any]:
    """サブコマンドのフラグ（キーは設定のドット区切りパス）のうち指定されたものを入れ子の dict にする"""
    overrides: dict[str, Any] = {}
    for key, value in flags.items():
        if value is None or (isinstance(value, (list, tuple)) and not value):
            continue
        _assign(overrides, key, value)
    return overrides


@dataclass
class CliState:
    config_path: str | None
    overrides: dict[str, Any]

    def load(self, flags: Mapping[str, Any] | None = None) -> ExperimentConfig:
        overrides = dict(self.overrides)
        for key, value in flag_overrides(flags or {}).items():
            current = overrides.get(key)
            if isinstance(value, dict) and isinstance(current, dict):
                overrides[key] = {**current, **value}
            else:
                overrides[key] = value
        return load_experiment_config(self.config_path, overrides)

    def pipeline(self, flags: Mapping[str, Any] | None = None) -> CreditScoringPipeline:
        return CreditScoringPipeline(self.load(flags))


def _echo(output: object) -> None:
    data = asdict(output) if is_dataclass(output) and not isinstance(output, type) else output
    if isinstance(data, dict):
        data = {k: asdict(v) if is_dataclass(v) and not isinstance(v, type) else v for k, v in data.items()}
    click.echo(json.dumps(data, indent=2, sort_keys=True, default=str))


def _state(ctx: click.Context) -> CliState:
    return ctx.obj


def _day(value: datetime | None) -> str | None:
    return None if value is None else value.date().isoformat()


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="実験設定ファイル（TOML / YAML / JSON）",
)
@click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE", help="設定の上書き（繰り返し可）")
@click.option("--seed", type=int, default=None, help="マスターシード")
@click.option("--run-id", type=str, default=None, help="成果物をまとめる実行 ID")
@click.option("-v", "--verbose", is_flag=True, help="DEBUG ログを出す")
@click.pass_context
def cli(
    ctx: click.Context,
    config_path: str | None,
    overrides: tuple[str, ...],
    seed: int | None,
    run_id: str | None,
    verbose: bool,
) -> None:
    """通話ネットワークによる与信スコアリング"""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO, format=LOG_FORMAT)
    values = parse_overrides(overrides)
    if seed is not None:
        values["seed"] = seed
    if run_id is not None:
        values["run_id"] = run_id
    ctx.obj = CliState(config_path=config_path, overrides=values)


@cli.command()
@click.option("--seed", type=int, default=None, help="合成データのシード")
@click.pass_context
def synth(ctx: click.Context, seed: int | None) -> None:
    """合成データ（CDR・銀行データ・正解ラベル）を生成する"""
    state = _state(ctx)
    if seed is not None and state.load().synth is None:
        raise DataError("no [synth] section in the experiment config")
    _echo(state.pipeline({"synth.seed": seed}).synthesize())


@cli.command()
@click.option("--min-duration", type=click.IntRange(min=0), default=None, help="これより短い通話（秒）を除外する")
@click.option("--delimiter", type=str, default=None, help="CSV の区切り文字（タブは \\t）")
@click.pass_context
def ingest(ctx: click.Context, min_duration: int | None, delimiter: str | None) -> None:
    """CDR と銀行データを取り込む"""
    flags = {"ingest.min_duration": min_duration, "ingest.delimiter": delimiter}
    _echo(_state(ctx).pipeline(flags).ingest())


@cli.command("build-graph")
@click.option(
    "--mode",
    "modes",
    type=click.Choice(["in", "out", "ud"], case_sensitive=False),
    multiple=True,
    help="ネットワークの向き（繰り返し可、既定は全て）",
)
@click.option("--window", type=(DATE, DATE), default=None, metavar="START END", help="暦月単位の期間（両端を含む）")
@click.option("--weight", type=click.Choice(["count", "duration"]), default=None, help="エッジ重み")
@click.pass_context
def build_graph(
    ctx: click.Context,
    modes: tuple[str, ...],
    window: tuple[datetime, datetime] | None,
    weight: str | None,
) -> None:
    """タイムフレーム × 向きごとに通話ネットワークを作る"""
    flags = {
        "graph.modes": [m.lower() for m in modes],
        "graph.weight": weight,
        "timeframe.window": None if window is None else [_day(day) for day in window],
    }
    _echo(_state(ctx).pipeline(flags).build_graph())


@cli.command()
@click.option("--method", "methods", type=click.Choice(["pr", "spa"]), multiple=True, help="伝播アルゴリズム")
@click.option("--seeds", type=click.Choice(["ge1", "ge2", "ge3"]), multiple=True, help="情報源の延滞回数の基準")
@click.option("--alpha", type=float, default=None, help="PR で近傍に従う確率")
@click.option("--d", "d", type=float, default=None, help="SPA で拡散するエネルギーの割合")
@click.option("--tol", type=float, default=None, help="収束の許容誤差")
@click.option("--max-iter", type=int, default=None, help="反復回数の上限")
@click.pass_context
def propagate(
    ctx: click.Context,
    methods: tuple[str, ...],
    seeds: tuple[str, ...],
    alpha: float | None,
    d: float | None,
    tol: float | None,
    max_iter: int | None,
) -> None:
    """延滞顧客からの影響（PageRank / Spreading Activation）を伝播する"""
    flags = {
        "propagation.methods": list(methods),
        "propagation.seed_criteria": list(seeds),
        "propagation.alpha": alpha,
        "propagation.d": d,
        "propagation.tolerance": tol,
        "propagation.max_iterations": max_iter,
    }
    _echo(_state(ctx).pipeline(flags).propagate())


@cli.command()
@click.option("--groups", type=str, default=None, metavar="sd,cb,lb,pr,spa", help="作る特徴量グループ")
@click.option("--corr-threshold", type=float, default=None, help="相関による特徴量削除の閾値 |ρ|")
@click.pass_context
def featurize(ctx: click.Context, groups: str | None, corr_threshold: float | None) -> None:
    """特徴量を抽出してデータセットを作る"""
    flags = {"feature.groups": groups, "feature.corr_threshold": corr_threshold}
    _echo(_state(ctx).pipeline(flags).featurize())


@cli.command()
@click.option("--labels", type=click.Path(dir_okay=False), default=None, help="node_id, is_defaulter の CSV")
@click.option("--permutations", type=click.IntRange(min=0), default=None, help="ラベル並べ替えの回数")
@click.pass_context
def netstats(ctx: click.Context, labels: str | None, permutations: int | None) -> None:
    """デフォルトのホモフィリー（dyadicity / heterophilicity）を検定する"""
    flags = {"netstats.labels": labels, "netstats.permutations": permutations}
    _echo(_state(ctx).pipeline(flags).netstats())


@cli.command()
@click.option(
    "--model",
    "classifiers",
    type=click.Choice(["logit", "tree", "forest"]),
    multiple=True,
    help="分類器（繰り返し可）",
)
@click.option("--seed", type=int, default=None, help="マスターシード")
@click.pass_context
def train(ctx: click.Context, classifiers: tuple[str, ...], seed: int | None) -> None:
    """学習/テストに分割し、モデルを学習する"""
    flags = {"classifiers": list(classifiers), "seed": seed}
    _echo(_state(ctx).pipeline(flags).train())


@cli.command()
@click.pass_context
def predict(ctx: click.Context) -> None:
    """テストセットをスコアリングする"""
    _echo(_state(ctx).pipeline().predict())


@cli.command()
@click.option("--roi", type=float, default=None, help="与信額に対する利益率")
@click.option("--lgd", type=float, default=None, help="デフォルト時損失率の上限")
@click.pass_context
def evaluate(ctx: click.Context, roi: float | None, lgd: float | None) -> None:
    """AUC・EMP・利益でモデルを評価する"""
    _echo(_state(ctx).pipeline({"emp.roi": roi, "emp.lgd": lgd}).evaluate())


@cli.command()
@click.option("--kind", "kinds", type=click.Choice(["profit", "accuracy"]), multiple=True, help="重要度の種類")
@click.pass_context
def importance(ctx: click.Context, kinds: tuple[str, ...]) -> None:
    """利益ベース・精度ベースの特徴量重要度を計算する"""
    _echo(_state(ctx).pipeline({"importance.kinds": list(kinds)}).importance())


@cli.command()
@click.option("--delong/--no-delong", default=None, help="DeLong 検定と支配グラフを作る")
@click.pass_context
def compare(ctx: click.Context, delong: bool | None) -> None:
    """DeLong 検定でモデルの AUC を比べる"""
    _echo(_state(ctx).pipeline({"compare.delong": delong}).compare())


@cli.command()
@click.option(
    "--parameter",
    type=click.Choice(["roi", "lgd", "both"]),
    default="both",
    show_default=True,
    help="変化させるパラメータ",
)
@click.option("--model", "model_name", default=None, help="モデル名（既定は重要度を計算するモデル）")
@click.pass_context
def sweep(ctx: click.Context, parameter: str, model_name: str | None) -> None:
    """ROI / LGD を変えたときの EMP と η̄"""
    parameters = ("roi", "lgd") if parameter == "both" else (parameter,)
    _echo(_state(ctx).pipeline().sweep(model_name, parameters))


@cli.command()
@click.option("--force", is_flag=True, help="完了済みのステージも実行し直す")
@click.pass_context
def run(ctx: click.Context, force: bool) -> None:
    """全ステージを実行してレポートを書く"""
    report = _state(ctx).pipeline().run(force=force)
    click.echo(json.dumps(report["evaluate"]["rows"], indent=2, default=str))


def exit_code(error: BaseException) -> int:
    if isinstance(error, StageError):
        return exit_code(error.cause)
    if isinstance(error, (click.UsageError, ValidationError)):
        return EXIT_USAGE
    if isinstance(error, ConvergenceError):
        return EXIT_CONVERGENCE
    # DataError、入力ファイルの欠落、ステージ内のその他の失敗
    return EXIT_DATA


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cli.main(args=list(argv) if argv is not None else None, standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except (CallnetError, ValidationError, FileNotFoundError) as e:
        logger.error("%s", e)
        click.echo(f"Error: {e}", err=True)
        return exit_code(e)
    except Exception as e:
        logger.error("unexpected failure: %s", e, exc_info=logger.isEnabledFor(logging.DEBUG))
        click.echo(f"Error: {e}", err=True)
        return exit_code(e)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
