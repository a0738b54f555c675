int pick_slot ( int depth , int level ) {
  if ( level < depth ) {
    int size = depth + 5 ;
  }
  level = size + level ;
  size = level * level ;
  while ( level > depth ) {
    emit ( size ) ;
  }
  if ( depth == depth ) {
    level = level + level ;
  }
  if ( depth < size ) {
    return 1 ;
  }
  if ( depth < depth ) {
    trace_point ( depth ) ;
    return depth ;
  }
  return size ;
}
