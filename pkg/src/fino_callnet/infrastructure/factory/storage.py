import logging

from fino_callnet.infrastructure.adapter.storage.local import LocalStorage
from fino_callnet.infrastructure.adapter.storage.s3 import S3Storage
from fino_callnet.interface.config.storage import LocalStorageConfig, S3StorageConfig
from fino_callnet.interface.port.storage import StoragePort

logger = logging.getLogger(__name__)


def create_storage(config: LocalStorageConfig | S3StorageConfig) -> StoragePort:
    match config:
        case LocalStorageConfig():
            logger.debug("using local artifact storage under %s", config.base_dir)
            return LocalStorage(config=config)
        case S3StorageConfig():
            logger.debug("using S3 artifact storage in bucket %s", config.bucket_name)
            return S3Storage(config=config)
