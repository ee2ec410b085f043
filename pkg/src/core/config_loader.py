# -*- coding: utf-8 -*-
"""
設定ファイル読み込みとバリデーション
"""

import copy
import yaml
import logging
from pathlib import Path
from typing import List, Dict, Any, Optional
from dataclasses import asdict, dataclass, field, fields, replace

from .errors import SimulationConfigError
from .model import SystemParams
from .bath import BathParams
from .logger import LOG_LEVELS

MODES = ('Run', 'Scan', 'Compare')
TOPOLOGIES = ('separate', 'common', 'weighted_common')
INITIAL_STATES = ('tms', 'normal_mode', 'vacuum', 'thermal')
GRID_AXES = ('omega2', 'lam', 'r', 'gamma', 'kT', 'cutoff', 'weight_ratio')
OUTPUT_FORMATS = ('csv', 'jsonl', 'both')


@dataclass
class PresetMeta:
    """プリセットのメタ情報"""
    name: str
    icon: str
    mode: str  # "Run", "Scan", または "Compare"
    description: str
    file_path: str


@dataclass(frozen=True)
class TopologySpec:
    """
    浴の接続形態の指定

    decoupled が真のとき、重みは点ごとに Q₊ を切り離す (cosθ, −sinθ) に決まる。
    """
    variant: str = 'separate'
    c1: float = 1.0
    c2: float = 1.0
    decoupled: bool = False


@dataclass(frozen=True)
class InitialSpec:
    """初期状態の指定"""
    state: str = 'tms'
    r: float = 2.0
    omega_ref: float = 1.0
    n1: float = 0.0
    n2: float = 0.0


@dataclass(frozen=True)
class DynamicsSpec:
    """時間発展の設定"""
    markovian: bool = True
    horizon: float = 500.0
    sample_dt: float = 0.05
    threshold: float = 1e-10
    settle_window: float = 50.0
    rtol: float = 1e-9
    atol: float = 1e-12
    coefficients: str = 'spline'        # spline | direct
    twin_frequencies: str = 'local'     # local | reference


@dataclass(frozen=True)
class GridAxis:
    """スキャン軸（name は GRID_AXES のいずれか）"""
    name: str
    values: tuple


@dataclass(frozen=True)
class Variant:
    """Run モードのラベル付き上書き"""
    label: str
    overrides: Dict[str, Any]


@dataclass(frozen=True)
class ExperimentConfig:
    """
    1つの実験の設定

    raw は読み込んだ YAML 辞書（デフォルト適用済み）。出力ヘッダーに記録する。
    """
    name: str
    mode: str
    description: str
    icon: str
    system: SystemParams
    bath: BathParams
    topology: TopologySpec
    initial: InitialSpec
    dynamics: DynamicsSpec
    grid: List[GridAxis] = field(default_factory=list)
    variants: List[Variant] = field(default_factory=list)
    output_path: Optional[str] = None
    output_format: str = 'csv'
    settings: Dict[str, Any] = field(default_factory=dict)
    raw: Dict[str, Any] = field(default_factory=dict, repr=False)

    def with_markovian(self, markovian: bool) -> 'ExperimentConfig':
        """markovian フラグを上書きした設定"""
        raw = copy.deepcopy(self.raw)
        raw['dynamics']['markovian'] = markovian
        return replace(self, dynamics=replace(self.dynamics, markovian=markovian), raw=raw)

    def with_overrides(self, overrides: Dict[str, Any]) -> 'ExperimentConfig':
        """
        セクション単位の上書きを適用した設定（variants 用）

        Args:
            overrides: {'system': {...}, 'bath': {...}, ...}
        """
        raw = copy.deepcopy(self.raw)
        for section, values in overrides.items():
            if section == 'label':
                continue
            if section not in ('system', 'bath', 'topology', 'initial', 'dynamics'):
                raise SimulationConfigError(f"variants で上書きできないセクションです: {section}")
            raw.setdefault(section, {}).update(values or {})
        return build_experiment(raw)

    def with_point(self, point: Dict[str, float]) -> 'ExperimentConfig':
        """グリッド点の値を適用した設定"""
        system, bath, topology, initial = self.system, self.bath, self.topology, self.initial
        for name, value in point.items():
            if name in ('omega2', 'lam'):
                system = replace(system, **{name: float(value)})
            elif name in ('gamma', 'kT', 'cutoff'):
                bath = replace(bath, **{name: float(value)})
            elif name == 'r':
                initial = replace(initial, r=float(value))
            elif name == 'weight_ratio':
                # c₂ を固定して c₁ = ratio·|c₂|
                topology = replace(topology, c1=float(value) * abs(topology.c2), decoupled=False)
            else:
                raise SimulationConfigError(f"不明なグリッド軸: {name}")
        return replace(self, system=system, bath=bath, topology=topology, initial=initial)


def _coerce(spec_cls, values: Dict[str, Any]):
    """
    YAML の値を dataclass のフィールド型に揃えて生成する

    PyYAML は '1e-10' のような指数表記を文字列として読むため float に変換する。
    """
    known = {f.name: f.type for f in fields(spec_cls)}
    unknown = set(values) - set(known)
    if unknown:
        raise TypeError(f"{spec_cls.__name__}: {sorted(unknown)}")
    kwargs = {}
    for name, value in values.items():
        kind = known[name]
        if kind is bool:
            if not isinstance(value, bool):
                raise ValueError(f"{name} は true/false である必要があります: {value!r}")
            kwargs[name] = value
        elif kind is float:
            kwargs[name] = float(value)
        else:
            kwargs[name] = str(value)
    return spec_cls(**kwargs)


def _axis_values(axis: Dict[str, Any], config_path) -> tuple:
    """軸指定（values または start/stop/count）から値の列を作る"""
    if 'values' in axis:
        values = tuple(float(v) for v in axis['values'])
    else:
        for key in ('start', 'stop', 'count'):
            if key not in axis:
                raise SimulationConfigError(f"{config_path}: grid.axes.{axis.get('name')}.{key} が必要です")
        count = int(axis['count'])
        if count < 1:
            raise SimulationConfigError(f"{config_path}: grid 軸の count は 1 以上である必要があります")
        start, stop = float(axis['start']), float(axis['stop'])
        if count == 1:
            values = (start,)
        else:
            step = (stop - start) / (count - 1)
            values = tuple(start + k * step for k in range(count))
    if not values:
        raise SimulationConfigError(f"{config_path}: grid 軸 {axis.get('name')} が空です")
    return values


def build_experiment(config: Dict[str, Any], config_path: str = '<config>') -> ExperimentConfig:
    """
    デフォルト適用済みの辞書から ExperimentConfig を組み立てる

    Raises:
        SimulationConfigError: 値が不正
    """
    meta = config['meta']
    settings = config['settings']
    try:
        system = SystemParams(
            omega1=1.0,
            omega2=float(config['system']['omega2']),
            lam=float(config['system']['lam']),
        )
        bath = BathParams(
            gamma=float(config['bath']['gamma']),
            cutoff=float(config['bath']['cutoff']),
            kT=float(config['bath']['kT']),
        )
        topology = _coerce(TopologySpec, config['topology'])
        initial = _coerce(InitialSpec, config['initial'])
        dynamics = _coerce(DynamicsSpec, config['dynamics'])
    except (TypeError, ValueError) as e:
        raise SimulationConfigError(f"{config_path}: 設定値が不正です: {e}")

    if topology.variant not in TOPOLOGIES:
        raise SimulationConfigError(f"{config_path}: topology.variant は {TOPOLOGIES} のいずれかです")
    if initial.state not in INITIAL_STATES:
        raise SimulationConfigError(f"{config_path}: initial.state は {INITIAL_STATES} のいずれかです")
    if not dynamics.horizon > 0:
        raise SimulationConfigError(f"{config_path}: dynamics.horizon は正である必要があります")
    if not dynamics.sample_dt > 0:
        raise SimulationConfigError(f"{config_path}: dynamics.sample_dt は正である必要があります")
    if not dynamics.threshold > 0:
        raise SimulationConfigError(f"{config_path}: dynamics.threshold は正である必要があります")
    if not dynamics.settle_window < dynamics.horizon:
        raise SimulationConfigError(f"{config_path}: dynamics.settle_window は horizon より短い必要があります")
    if dynamics.coefficients not in ('spline', 'direct'):
        raise SimulationConfigError(f"{config_path}: dynamics.coefficients は spline または direct です")
    if dynamics.twin_frequencies not in ('local', 'reference'):
        raise SimulationConfigError(f"{config_path}: dynamics.twin_frequencies は local または reference です")

    grid = []
    for axis in config.get('grid', {}).get('axes', []):
        name = axis.get('name')
        if name not in GRID_AXES:
            raise SimulationConfigError(f"{config_path}: grid 軸 '{name}' は {GRID_AXES} のいずれかです")
        grid.append(GridAxis(name=name, values=_axis_values(axis, config_path)))

    variants = [
        Variant(label=str(v.get('label', f"V{i + 1}")), overrides=v)
        for i, v in enumerate(config.get('variants', []))
    ]

    output = settings.get('output', {})
    output_format = output.get('format', 'csv')
    if output_format not in OUTPUT_FORMATS:
        raise SimulationConfigError(f"{config_path}: settings.output.format は {OUTPUT_FORMATS} のいずれかです")
    if settings.get('logging', {}).get('level', 'INFO') not in LOG_LEVELS:
        raise SimulationConfigError(f"{config_path}: settings.logging.level は {LOG_LEVELS} のいずれかです")

    return ExperimentConfig(
        name=meta['name'],
        mode=meta['mode'],
        description=meta['description'],
        icon=meta['icon'],
        system=system,
        bath=bath,
        topology=topology,
        initial=initial,
        dynamics=dynamics,
        grid=grid,
        variants=variants,
        output_path=output.get('path'),
        output_format=output_format,
        settings=settings,
        raw=config,
    )


class ConfigLoader:
    """
    YAML設定ファイルを読み込み、バリデーションを行うクラス

    機能:
    - YAMLファイルのパース
    - 必須フィールドの検証
    - デフォルト値の適用（fig1a と同じ浴パラメータ、r = 2 など）
    - プリセット自動検出（configs/presets/*.yaml）
    """

    def __init__(self, configs_dir: str = "configs/presets"):
        """
        初期化

        Args:
            configs_dir: プリセットディレクトリのパス
        """
        self.configs_dir = Path(configs_dir)
        self.logger = logging.getLogger(__name__)

    def load_config(self, config_path: str) -> ExperimentConfig:
        """
        設定ファイルを読み込む

        Args:
            config_path: 設定ファイルのパス

        Returns:
            実験設定

        Raises:
            FileNotFoundError: ファイルが存在しない
            yaml.YAMLError: YAML形式が不正
            SimulationConfigError: 必須フィールドが不足・値が不正
        """
        config_path = Path(config_path)

        if not config_path.exists():
            raise FileNotFoundError(f"設定ファイルが見つかりません: {config_path}")

        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                config = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise yaml.YAMLError(f"YAML形式が不正です: {e}")

        return self.parse(config, config_path)

    def parse(self, config: Dict[str, Any], config_path: Any = '<config>') -> ExperimentConfig:
        """辞書（YAML の内容）を検証して ExperimentConfig にする"""
        if not isinstance(config, dict):
            raise SimulationConfigError(f"{config_path}: 設定の最上位はマッピングである必要があります")
        config = copy.deepcopy(config)

        # バリデーション
        self._validate_config(config, config_path)

        # デフォルト値の適用
        config = self._apply_defaults(config)

        return build_experiment(config, str(config_path))

    def resolve_preset(self, name: str) -> Path:
        """--preset NAME を configs/presets/NAME.yaml に解決する"""
        path = self.configs_dir / f"{name}.yaml"
        if not path.exists():
            raise FileNotFoundError(f"プリセットが見つかりません: {path}")
        return path

    def _validate_config(self, config: Dict[str, Any], config_path):
        """
        設定ファイルのバリデーション

        Args:
            config: 設定内容
            config_path: 設定ファイルのパス

        Raises:
            SimulationConfigError: バリデーションエラー
        """
        # metaセクションの検証
        if 'meta' not in config:
            raise SimulationConfigError(f"{config_path}: 'meta'セクションが必要です")

        meta = config['meta']
        required_meta_fields = ['name', 'mode']
        for field_name in required_meta_fields:
            if field_name not in meta:
                raise SimulationConfigError(f"{config_path}: meta.{field_name} が必要です")

        # modeの検証
        if meta['mode'] not in MODES:
            raise SimulationConfigError(
                f"{config_path}: meta.mode は 'Run', 'Scan', または 'Compare' である必要があります"
            )

        for section in ('system', 'bath', 'topology', 'initial', 'dynamics', 'settings'):
            if section in config and not isinstance(config[section], dict):
                raise SimulationConfigError(f"{config_path}: '{section}' はマッピングである必要があります")

        # モード別の検証
        if meta['mode'] == 'Scan':
            axes = config.get('grid', {}).get('axes', [])
            if not axes:
                raise SimulationConfigError(f"{config_path}: Scan モードには 'grid.axes' が必要です")
        elif 'grid' in config:
            raise SimulationConfigError(f"{config_path}: 'grid' は Scan モードでのみ使用できます")

        if 'variants' in config and meta['mode'] != 'Run':
            raise SimulationConfigError(f"{config_path}: 'variants' は Run モードでのみ使用できます")

    def _apply_defaults(self, config: Dict[str, Any]) -> Dict[str, Any]:
        """
        デフォルト値を適用

        Args:
            config: 設定内容

        Returns:
            デフォルト値適用済みの設定
        """
        meta = config['meta']
        meta.setdefault('icon', '🔬')
        meta.setdefault('description', '')

        # settingsのデフォルト値
        settings = config.setdefault('settings', {})
        settings.setdefault('enable_logging', True)
        settings.setdefault('threads', 1)

        # previewのデフォルト値
        if 'preview' not in settings:
            settings['preview'] = {}
        settings['preview'].setdefault('mode', 'both')
        settings['preview'].setdefault('count', 3)

        # loggingのデフォルト値
        if 'logging' not in settings:
            settings['logging'] = {}
        settings['logging'].setdefault('log_directory', 'logs')
        settings['logging'].setdefault('level', 'INFO')

        if 'output' not in settings:
            settings['output'] = {}
        settings['output'].setdefault('format', 'csv')

        # 物理パラメータのデフォルト値（fig1a と同じ浴）
        system = config.setdefault('system', {})
        system.setdefault('omega2', 1.0)
        system.setdefault('lam', 0.0)

        bath = config.setdefault('bath', {})
        bath.setdefault('gamma', 0.001)
        bath.setdefault('cutoff', 50.0)
        bath.setdefault('kT', 10.0)

        topology = config.setdefault('topology', {})
        topology.setdefault('variant', 'separate')
        topology.setdefault('c1', 1.0)
        topology.setdefault('c2', 1.0)
        topology.setdefault('decoupled', False)

        initial = config.setdefault('initial', {})
        initial.setdefault('state', 'tms')
        initial.setdefault('r', 2.0)
        initial.setdefault('omega_ref', 1.0)

        dynamics = config.setdefault('dynamics', {})
        for key, value in asdict(DynamicsSpec()).items():
            dynamics.setdefault(key, value)

        return config

    def discover_presets(self) -> List[PresetMeta]:
        """
        プリセットディレクトリからプリセットを自動検出

        Returns:
            検出されたプリセットのリスト
        """
        presets = []

        if not self.configs_dir.exists():
            self.logger.warning(f"設定ディレクトリが見つかりません: {self.configs_dir}")
            return presets

        for yaml_file in sorted(self.configs_dir.glob("*.yaml")):
            try:
                config = self.load_config(yaml_file)

                preset = PresetMeta(
                    name=config.name,
                    icon=config.icon,
                    mode=config.mode,
                    description=config.description,
                    file_path=str(yaml_file)
                )
                presets.append(preset)

            except Exception as e:
                self.logger.warning(f"{yaml_file} の読み込みに失敗: {e}")
                continue

        return presets
